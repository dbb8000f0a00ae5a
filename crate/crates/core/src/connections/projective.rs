use std::sync::Arc;

use super::connection::{connection_exists, counit_map, Connection};
use crate::algebra::{is_projective, Algebra, AlgebraMap, Bimodule, TensorChain};
use crate::amitsur::AmitsurComplex;
use crate::coring::{Coring, Grouplike};
use crate::error::{Error, Result};
use crate::exactla::{kron_vec, unit_vector, Matrix};
use crate::report::Check;

/// Connections against projectivity for a module over `A` with the
/// Sweedler coring of `k → A`.
#[derive(Clone, Debug)]
pub struct CuntzQuillen {
    pub projective: bool,
    pub connection: Option<Connection>,
    /// `M ⊗_A ε` is the action `M ⊗ A → M` under `M ⊗_A (A ⊗ A) ≅ M ⊗ A`.
    pub action: Check,
}

impl CuntzQuillen {
    pub fn has_connection(&self) -> bool {
        self.connection.is_some()
    }

    pub fn agree(&self) -> bool {
        self.projective == self.has_connection()
    }
}

/// The reduced complex of the Sweedler coring of `k → A`, up to `Ω²`.
pub fn universal_complex(a: &Arc<Algebra>) -> Result<Arc<AmitsurComplex>> {
    let (c, g) = Coring::sweedler(&AlgebraMap::from_ground(a.clone()))?;
    let c = Arc::new(c);
    let g = Grouplike::new(&c, g)?;
    Ok(Arc::new(AmitsurComplex::new(c, &g, 2, true)?))
}

pub fn cuntz_quillen_check(cx: &Arc<AmitsurComplex>, module: &Bimodule) -> Result<CuntzQuillen> {
    let coring = &cx.coring;
    let a = &coring.ring;
    let f = a.field();
    let (dm, da) = (module.dim(), a.dim());
    if coring.dim() != da * da {
        return Err(Error::Precondition("expected the Sweedler coring of k → A".into()));
    }
    let chain = TensorChain::new(vec![module.clone(), coring.bimodule.clone()])?;
    // m ⊗ (a ⊗ b) ↦ ma ⊗ b, then the action m ⊗ b ↦ mb
    let iso = chain.map_from_lifts(1, dm * da, |t| {
        let (ai, bi) = (t[1] / da, t[1] % da);
        kron_vec(&module.act_right(&unit_vector(f, dm, t[0]), &a.basis(ai)), &unit_vector(f, da, bi))
    });
    let action = Matrix::build_columns(f, dm, dm * da, |x| {
        module.act_right(&unit_vector(f, dm, x / da), &a.basis(x % da))
    });
    let mut check = Check::from_matrices(
        "M ⊗ ε is the action",
        &[],
        &counit_map(&chain, module, coring),
        &action.mul(&iso),
    );
    if iso.rows() != iso.cols() || iso.rank() != iso.cols() {
        check = Check::fail("M ⊗ ε is the action", "M ⊗_A (A ⊗ A) → M ⊗ A is not bijective");
    }
    Ok(CuntzQuillen {
        projective: is_projective(module).projective,
        connection: connection_exists(cx, module)?,
        action: check,
    })
}
