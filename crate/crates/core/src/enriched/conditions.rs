use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::BaseReflection;

/// The conditions a base reflection needs for the derived reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    /// `η_x × η_y` is a unit for `x × y`: it factors through `η_{x×y}` by an
    /// isomorphism.
    ProductUnits,
    /// The unit of the terminal object is invertible.
    TerminalUnit,
    /// Reflected objects are fixed: their unit is invertible.
    Idempotent,
}

/// One checked instance of a base condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCondition {
    pub kind: ConditionKind,
    /// Indices into the sample, empty for the terminal object.
    pub subjects: Vec<usize>,
    pub holds: bool,
    pub detail: String,
}

/// Checks the base conditions on every object and ordered pair of `sample`.
pub fn check_base_conditions<B: BaseReflection>(base: &B, sample: &[B::Obj]) -> Vec<BaseCondition> {
    let mut out = Vec::new();
    let one = base.terminal();
    let (holds, detail) = match base.reflect(&one) {
        Ok((_, eta)) => match base.invert(&eta) {
            Some(_) => (true, String::new()),
            None => (false, String::from("the unit of the terminal object is not invertible")),
        },
        Err(e) => (false, format!("{e}")),
    };
    out.push(BaseCondition { kind: ConditionKind::TerminalUnit, subjects: Vec::new(), holds, detail });
    for (k, x) in sample.iter().enumerate() {
        let (holds, detail) = match base.reflect(x).and_then(|(fx, _)| base.reflect(&fx).map(|r| (fx, r))) {
            Ok((fx, (_, eta))) if base.is_reflected(&fx) && base.invert(&eta).is_some() => (true, String::new()),
            Ok(_) => (false, String::from("the reflection of the object is not fixed by the reflector")),
            Err(e) => (false, format!("{e}")),
        };
        out.push(BaseCondition { kind: ConditionKind::Idempotent, subjects: alloc::vec![k], holds, detail });
    }
    for (kx, x) in sample.iter().enumerate() {
        for (ky, y) in sample.iter().enumerate() {
            let (holds, detail) = product_units(base, x, y);
            out.push(BaseCondition { kind: ConditionKind::ProductUnits, subjects: alloc::vec![kx, ky], holds, detail });
        }
    }
    out
}

fn product_units<B: BaseReflection>(base: &B, x: &B::Obj, y: &B::Obj) -> (bool, String) {
    let run = || -> Result<(bool, String), super::EnrichedError> {
        let cone = base.product(x, y);
        let (fx, ex) = base.reflect(x)?;
        let (fy, ey) = base.reflect(y)?;
        let (_, ep) = base.reflect(&cone.apex)?;
        let target = base.product(&fx, &fy);
        let both = super::times(base, &cone, &target, &ex, &ey)?;
        Ok(match base.lift(&ep, &both) {
            None => (false, String::from("η_x × η_y does not factor through the unit of the product")),
            Some(phi) if base.invert(&phi).is_none() => {
                (false, String::from("the comparison with the product of reflections is not invertible"))
            }
            Some(_) => (true, String::new()),
        })
    };
    run().unwrap_or_else(|e| (false, format!("{e}")))
}
