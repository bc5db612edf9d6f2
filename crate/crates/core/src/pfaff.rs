//! Pfaffian systems at the generic point: derived systems and flags,
//! Frobenius integrability and structure coefficients.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forms::{clear_denominators, rank_of, Coframe, DiffForm};
use crate::scalar::linalg::{self, Matrix};
use crate::scalar::{Chart, ScalarExpr};

/// An ordered list of independent 1-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaffianSystem {
    chart: Chart,
    generators: Vec<DiffForm>,
}

/// `J, J⁽¹⁾, J⁽²⁾, …` up to stabilization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedFlag {
    pub systems: Vec<PfaffianSystem>,
    pub dims: Vec<usize>,
    /// Nonconstant pivots and divided-out factors met along the way; the
    /// generic answer may be wrong on their zero sets.
    pub excluded: Vec<ScalarExpr>,
}

impl DerivedFlag {
    pub fn last(&self) -> &PfaffianSystem {
        self.systems.last().expect("flag is never empty")
    }
}

/// Coefficients of `ω³∧ω⁴` in `dθ, dω¹, dω²` modulo a rank-3 system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureCoefficients {
    pub r0: ScalarExpr,
    pub r1: ScalarExpr,
    pub r2: ScalarExpr,
    pub coframe: Coframe,
}

/// Outcome of asking whether `dF` lies in a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Containment {
    /// `dF = Σ fᵢ αᵢ`.
    Contained(Vec<ScalarExpr>),
    /// Nonzero coefficients of `dF` on the completing coframe members.
    Refused { residual: Vec<(DiffForm, ScalarExpr)> },
}

impl Containment {
    pub fn is_contained(&self) -> bool {
        matches!(self, Containment::Contained(_))
    }
}

impl PfaffianSystem {
    pub fn new(chart: &Chart, generators: Vec<DiffForm>) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != 1 || g.chart() != chart) {
            return Err(Error::DegreeMismatch("generators must be 1-forms on the chart".into()));
        }
        if rank_of(&generators) < generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(PfaffianSystem { chart: chart.clone(), generators })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn generators(&self) -> &[DiffForm] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The generators followed by completing coordinate differentials.
    pub fn coframe(&self) -> Result<Coframe> {
        Coframe::complete(&self.chart, &self.generators)
    }

    pub fn contains_form(&self, alpha: &DiffForm) -> bool {
        let mut all = self.generators.clone();
        all.push(alpha.clone());
        rank_of(&all) == self.rank()
    }

    pub fn same_span(&self, other: &PfaffianSystem) -> bool {
        self.rank() == other.rank() && other.generators.iter().all(|g| self.contains_form(g))
    }

    /// Reduced row echelon form of the generator coefficient matrix; equal
    /// spans give equal matrices.
    pub fn echelon(&self) -> Matrix {
        let m: Matrix = self.generators.iter().map(DiffForm::one_form_coefficients).collect();
        linalg::rref(&m).rows
    }

    fn derive(&self) -> Result<(PfaffianSystem, Vec<ScalarExpr>)> {
        let k = self.rank();
        if k == 0 {
            return Ok((self.clone(), Vec::new()));
        }
        // α = Σ fᵢαᵢ lies in J⁽¹⁾ iff Σ fᵢ dαᵢ∧α₁∧…∧α_k = 0
        let top = self.generators.iter().skip(1).fold(self.generators[0].clone(), |acc, g| acc.wedge(g));
        let columns: Vec<DiffForm> = self.generators.iter().map(|g| g.d().wedge(&top)).collect();
        let mut slots: Vec<Vec<usize>> = columns.iter().flat_map(|c| c.terms().into_iter().map(|(i, _)| i)).collect();
        slots.sort();
        slots.dedup();
        let rows: Matrix = slots.iter().map(|idx| columns.iter().map(|c| c.coefficient(idx)).collect()).collect();
        let mut excluded = Vec::new();
        let basis = if rows.is_empty() {
            linalg::null_space(&rows, k)
        } else {
            let ech = linalg::rref(&rows);
            excluded.extend(ech.pivot_values.iter().filter(|v| !v.is_constant()).cloned());
            linalg::null_space_of(&ech, k)
        };
        let mut generators = Vec::with_capacity(basis.len());
        for f in basis {
            let mut alpha = DiffForm::zero(&self.chart, 1);
            for (fi, g) in f.iter().zip(&self.generators) {
                if !fi.is_zero() {
                    alpha = &alpha + &g.scale(fi);
                }
            }
            let (cleared, common) = clear_denominators(&alpha);
            if !common.is_constant() {
                excluded.push(ScalarExpr::from_poly(common));
            }
            generators.push(cleared);
        }
        Ok((PfaffianSystem::new(&self.chart, generators)?, excluded))
    }

    /// `{α ∈ span J : dα ≡ 0 mod J}`, with generators cleared to polynomial form.
    pub fn derived_system(&self) -> Result<PfaffianSystem> {
        self.derive().map(|(s, _)| s)
    }

    /// Iterates the derived system. An integrable system gives the
    /// one-entry flag `[J]`; otherwise the list runs through the first
    /// system that repeats, so its last two dims agree.
    pub fn derived_flag(&self) -> Result<DerivedFlag> {
        let mut systems = alloc::vec![self.clone()];
        let mut excluded = Vec::new();
        let mut current = self.clone();
        loop {
            let (next, loci) = current.derive()?;
            excluded.extend(loci);
            let stable = next.rank() == current.rank();
            if stable && systems.len() == 1 {
                break;
            }
            systems.push(next.clone());
            if stable {
                break;
            }
            current = next;
        }
        let dims = systems.iter().map(PfaffianSystem::rank).collect();
        Ok(DerivedFlag { systems, dims, excluded })
    }

    /// Frobenius criterion: the first derived system has full rank.
    pub fn is_integrable(&self) -> Result<bool> {
        Ok(self.derived_system()?.rank() == self.rank())
    }

    /// Structure coefficients of a rank-3 system `{θ, ω¹, ω²}` against its
    /// completed coframe `(θ, ω¹, ω², ω³, ω⁴)`.
    pub fn structure_coefficients(&self) -> Result<StructureCoefficients> {
        if self.rank() != 3 || self.chart.len() != 5 {
            return Err(Error::RankMismatch { expected: 3, found: self.rank() });
        }
        let coframe = self.coframe()?;
        let mut r = self
            .generators
            .iter()
            .map(|g| Ok(coframe.expand(&g.d())?.coefficient(&[3, 4])))
            .collect::<Result<Vec<_>>>()?;
        let r2 = r.pop().expect("three generators");
        let r1 = r.pop().expect("three generators");
        let r0 = r.pop().expect("three generators");
        Ok(StructureCoefficients { r0, r1, r2, coframe })
    }

    /// Replaces `(ω¹, ω²)` by `(r₂ω¹ − r₁ω², ω_keep)` so the first has zero
    /// structure coefficient; `ω_keep` is `ω²` when `r₂ ≠ 0`, else `ω¹`.
    pub fn rotate_for_parabolic(&self, sc: &StructureCoefficients) -> Result<PfaffianSystem> {
        if self.rank() != 3 {
            return Err(Error::RankMismatch { expected: 3, found: self.rank() });
        }
        if !sc.r0.is_zero() {
            return Err(Error::Unsupported("dθ ≢ 0 mod J; rotation needs r0 = 0".into()));
        }
        if sc.r1.is_zero() && sc.r2.is_zero() {
            return Err(Error::Integrable);
        }
        let g = &self.generators;
        let rotated = &g[1].scale(&sc.r2) - &g[2].scale(&sc.r1);
        let keep = if sc.r2.is_zero() { g[1].clone() } else { g[2].clone() };
        let (rotated, _) = clear_denominators(&rotated);
        PfaffianSystem::new(&self.chart, alloc::vec![g[0].clone(), rotated, keep])
    }

    /// Solves `dF = Σ fᵢ αᵢ` over the function field.
    pub fn contains_differential(&self, f: &ScalarExpr) -> Result<Containment> {
        let df = DiffForm::function(&self.chart, f.clone()).d();
        let cf = self.coframe()?;
        let coeffs = cf.coefficients(&df)?;
        let k = self.rank();
        let residual: Vec<(DiffForm, ScalarExpr)> =
            cf.forms()[k..].iter().cloned().zip(coeffs[k..].iter().cloned()).filter(|(_, c)| !c.is_zero()).collect();
        if residual.is_empty() {
            Ok(Containment::Contained(coeffs[..k].to_vec()))
        } else {
            Ok(Containment::Refused { residual })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use alloc::vec;

    const X: usize = 0;
    const Y: usize = 1;
    const Z: usize = 2;
    const P: usize = 3;
    const Q: usize = 4;

    fn d(i: usize) -> DiffForm {
        DiffForm::differential(&Chart::base(), i)
    }

    fn theta() -> DiffForm {
        &(&d(Z) - &d(X).scale(&ScalarExpr::var(P))) - &d(Y).scale(&ScalarExpr::var(Q))
    }

    fn sys(gens: Vec<DiffForm>) -> PfaffianSystem {
        PfaffianSystem::new(&Chart::base(), gens).unwrap()
    }

    fn heat_form() -> DiffForm {
        &d(P) + &d(X).scale(&ScalarExpr::var(Q))
    }

    #[test]
    fn derived_system_examples() {
        let homog = sys(vec![theta(), d(P), d(Q)]);
        assert!(homog.derived_system().unwrap().same_span(&homog));

        let heat = sys(vec![theta(), d(Y), heat_form()]);
        let j1 = heat.derived_system().unwrap();
        assert_eq!(j1.generators(), &[theta(), d(Y)]);

        let wave = sys(vec![theta(), d(X), d(P)]);
        assert_eq!(wave.derived_system().unwrap().generators(), &[d(X), d(P)]);
    }

    #[test]
    fn derived_flag_examples() {
        let heat = sys(vec![theta(), d(Y), heat_form()]);
        let flag = heat.derived_flag().unwrap();
        assert_eq!(flag.dims, vec![3, 2, 1, 1]);
        assert_eq!(flag.last().generators(), &[d(Y)]);

        assert_eq!(sys(vec![theta(), d(P), d(Q)]).derived_flag().unwrap().dims, vec![3]);

        let wave = sys(vec![theta(), d(X), d(P)]).derived_flag().unwrap();
        assert_eq!(wave.dims, vec![3, 2, 2]);
        assert_eq!(wave.last().generators(), &[d(X), d(P)]);
    }

    #[test]
    fn integrability_examples() {
        assert!(sys(vec![theta(), d(P), d(Q)]).is_integrable().unwrap());
        assert!(!sys(vec![theta(), d(X), d(P)]).is_integrable().unwrap());
        assert!(sys(vec![d(X), d(Y), d(Z)]).is_integrable().unwrap());
    }

    #[test]
    fn dependent_generators_rejected() {
        assert_eq!(
            PfaffianSystem::new(&Chart::base(), vec![d(X), d(X).scale(&ScalarExpr::var(P))]),
            Err(Error::DependentGenerators)
        );
    }

    #[test]
    fn structure_coefficient_examples() {
        let heat = sys(vec![theta(), d(Y), heat_form()]);
        let sc = heat.structure_coefficients().unwrap();
        assert_eq!(sc.coframe.forms()[3..], [d(X), d(Q)]);
        assert_eq!((sc.r0.clone(), sc.r1.clone(), sc.r2.clone()), (int(0), int(0), int(-1)));

        let sc = sys(vec![theta(), d(P), d(Q)]).structure_coefficients().unwrap();
        assert!(sc.r0.is_zero() && sc.r1.is_zero() && sc.r2.is_zero());

        // dθ ≡ dy∧dq with completion (dy, dq)
        let sc = sys(vec![theta(), d(X), d(P)]).structure_coefficients().unwrap();
        assert_eq!(sc.coframe.forms()[3..], [d(Y), d(Q)]);
        assert_eq!((sc.r0, sc.r1, sc.r2), (int(1), int(0), int(0)));

        assert!(sys(vec![theta(), d(X)]).structure_coefficients().is_err());
    }

    #[test]
    fn rotation_examples() {
        let heat = sys(vec![theta(), d(Y), heat_form()]);
        let sc = heat.structure_coefficients().unwrap();
        let rotated = heat.rotate_for_parabolic(&sc).unwrap();
        assert_eq!(rotated.generators(), &[theta(), d(Y), heat_form()]);

        let swapped = sys(vec![theta(), heat_form(), d(Y)]);
        let sc = swapped.structure_coefficients().unwrap();
        assert_eq!((sc.r1.clone(), sc.r2.clone()), (int(-1), int(0)));
        let rotated = swapped.rotate_for_parabolic(&sc).unwrap();
        assert_eq!(rotated.generators(), &[theta(), d(Y), heat_form()]);
        let sc2 = rotated.structure_coefficients().unwrap();
        assert!(sc2.r1.is_zero() && !sc2.r2.is_zero());

        let homog = sys(vec![theta(), d(P), d(Q)]);
        let sc = homog.structure_coefficients().unwrap();
        assert_eq!(homog.rotate_for_parabolic(&sc), Err(Error::Integrable));
    }

    #[test]
    fn containment_examples() {
        let x = ScalarExpr::var(X);
        let cex = sys(vec![theta(), d(X), d(Y)]);
        assert_eq!(
            cex.contains_differential(&ScalarExpr::var(Z)).unwrap(),
            Containment::Contained(vec![int(1), ScalarExpr::var(P), ScalarExpr::var(Q)])
        );
        let wave = sys(vec![theta(), d(X), d(P)]);
        assert_eq!(
            wave.contains_differential(&(ScalarExpr::var(P) - &x * &x)).unwrap(),
            Containment::Contained(vec![int(0), int(-2) * &x, int(1)])
        );
        match wave.contains_differential(&ScalarExpr::var(Y)).unwrap() {
            Containment::Refused { residual } => {
                assert_eq!(residual, vec![(d(Y), int(1))]);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }
}
