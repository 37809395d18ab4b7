//! Derived flag of the horizontal distribution.
//!
//! Inside the nilpotent algebra `⊕_{r ≥ 1} 𝒢^{-r,r}` the distribution of the
//! infinitesimal period relation is `W^{[0]} = 𝒢^{-1,1}`, and the derived
//! flag is the bracket closure `W^{[k+1]} = W^{[k]} + [W^{[k]}, W^{[k]}]`.
//! Dually, `I_[k]` is the annihilator of `W^{[k]}`; its dimension is reported
//! alongside each step. The flag stabilizes in at most `n` steps.

use crate::hodge::GradedLie;
use crate::linalg::Subspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagStep {
    pub k: usize,
    pub w_dim: usize,
    pub i_dim: usize,
}

#[derive(Debug, Clone)]
pub struct FlagReport {
    /// Steps `k = 0, 1, …` up to and including the first repeated dimension.
    pub steps: Vec<FlagStep>,
    pub stabilized_at: usize,
    pub terminal_dim: usize,
    /// The subspaces `W^{[k]}`, parallel to `steps`.
    pub spaces: Vec<Subspace>,
}

impl FlagReport {
    /// `dim I_[k]`; steps past stabilization repeat the terminal value.
    pub fn i_dim(&self, k: usize) -> usize {
        let idx = k.min(self.steps.len() - 1);
        self.steps[idx].i_dim
    }

    pub fn i_rank(&self) -> usize {
        self.steps[0].i_dim
    }
}

/// Bracket closure of `W ⊆ ⊕_{r≥1} 𝒢^{-r,r}` (coordinates of the nilpotent part).
fn bracket_step(lie: &GradedLie, w: &Subspace) -> Subspace {
    let basis = w.basis();
    let mats: Vec<_> = basis.iter().map(|v| lie.nilpotent_from_coords(v)).collect();
    let mut vecs: Vec<Vec<crate::linalg::Scalar>> = basis.to_vec();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let c = mats[i].commutator(&mats[j]);
            let coords = lie
                .nilpotent_coords(&c)
                .expect("bracket of nilpotent elements stays nilpotent");
            vecs.push(coords);
        }
    }
    Subspace::from_vectors(lie.nilpotent_dim(), vecs)
}

pub fn derived_flag(lie: &GradedLie) -> FlagReport {
    let total = lie.nilpotent_dim();
    let mut spaces = vec![lie.horizontal_subsystem(1)];
    let mut steps = vec![FlagStep {
        k: 0,
        w_dim: spaces[0].dim(),
        i_dim: total - spaces[0].dim(),
    }];
    loop {
        let prev = spaces.last().unwrap();
        let next = bracket_step(lie, prev);
        let k = steps.len();
        steps.push(FlagStep {
            k,
            w_dim: next.dim(),
            i_dim: total - next.dim(),
        });
        let done = next.dim() == prev.dim();
        spaces.push(next);
        if done {
            break;
        }
    }
    let stabilized_at = steps.len() - 1;
    FlagReport {
        terminal_dim: steps.last().unwrap().i_dim,
        steps,
        stabilized_at,
        spaces,
    }
}

#[derive(Debug, Clone)]
pub struct FlagTheoremReport {
    /// All `h^{p,q}` nonzero (hypothesis of the containment statement).
    pub hypothesis_ok: bool,
    /// `W^{[m]} ⊇ ⊕_{r ≤ 2^m}` at every computed step.
    pub containment_ok: bool,
    /// Equality `I_[m] = I(2^m)` at every step below stabilization; only
    /// asserted when all `h^{p,q} ≥ 2`.
    pub equality_expected: bool,
    pub equality_ok: bool,
    /// `I_[m] = 0` for `m ≥ ⌈log₂ n⌉`.
    pub termination_ok: bool,
    pub termination_bound: usize,
    pub flag: FlagReport,
}

fn ceil_log2(n: usize) -> usize {
    let mut m = 0;
    while (1usize << m) < n {
        m += 1;
    }
    m
}

/// Containment `I_[m] ⊆ I(2^m)` (dually `W^{[m]} ⊇ ⊕_{r ≤ 2^m}`), equality
/// when every `h^{p,q} ≥ 2`, and the termination bound `⌈log₂ n⌉`.
pub fn check_flag_theorem(lie: &GradedLie) -> FlagTheoremReport {
    let n = lie.hodge().weight();
    let flag = derived_flag(lie);
    let hypothesis_ok = lie.hodge().h().iter().all(|&x| x > 0);
    let all_ge2 = lie.hodge().h().iter().all(|&x| x >= 2);

    let mut containment_ok = true;
    let mut equality_ok = true;
    if hypothesis_ok {
        for (m, w) in flag.spaces.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let depth = (1usize << m).min(n);
            let target = lie.horizontal_subsystem(depth);
            if !w.contains_subspace(&target) {
                containment_ok = false;
            }
            if w != &target {
                equality_ok = false;
            }
        }
    }

    let bound = ceil_log2(n.max(1));
    let termination_ok = flag.i_dim(bound) == 0;

    FlagTheoremReport {
        hypothesis_ok,
        containment_ok: hypothesis_ok && containment_ok,
        equality_expected: all_ge2 && n >= 2,
        equality_ok: hypothesis_ok && equality_ok,
        termination_ok,
        termination_bound: bound,
        flag,
    }
}

#[derive(Debug, Clone)]
pub struct SpecialCaseReport {
    /// Set when `h^{n,0} = 1`: the annihilator of `⊕_{r ≤ n-1}` inside `I`
    /// (the forms dropping the filtration by the full weight) is zero.
    pub drop_full_trivial: Option<bool>,
    /// Dimension of that annihilator, `C(h^{n,0}, 2)` in general.
    pub drop_full_dim: usize,
    /// Set when `h^{2,2} = 0` (weight 4): the flag freezes after one step
    /// at a nonzero terminal system.
    pub frozen_nonzero: Option<bool>,
    pub flag: FlagReport,
}

/// Weight-4 special cases: `h^{4,0} = 1` kills the grade-4 dual forms, and
/// `h^{2,2} = 0` freezes the derived flag at `I_[1] ≠ 0`.
pub fn special_cases(lie: &GradedLie) -> SpecialCaseReport {
    let n = lie.hodge().weight();
    assert_eq!(n, 4, "special cases are for weight 4");
    let flag = derived_flag(lie);
    // Forms in I vanishing on everything of depth < n are dual to 𝒢^{-n,n}.
    let drop_full_dim = lie.nilpotent_dim() - lie.horizontal_subsystem(n - 1).dim();
    let h_top = lie.hodge().level_dim(n);
    let drop_full_trivial = if h_top == 1 {
        Some(drop_full_dim == 0)
    } else {
        None
    };
    let frozen_nonzero = if lie.hodge().level_dim(2) == 0 {
        let i1 = flag.i_dim(1);
        Some(i1 > 0 && flag.terminal_dim == i1 && flag.i_dim(2) == i1)
    } else {
        None
    };
    SpecialCaseReport {
        drop_full_trivial,
        drop_full_dim,
        frozen_nonzero,
        flag,
    }
}

/// Whether the containment `W^{[m]} ⊇ ⊕_{r ≤ 2^m}` can hold at every step.
///
/// For even weight `n ≥ 6` with `h^{(n+2)/2,(n-2)/2} = 1`, the self-paired
/// middle block of `𝒢^{-2,2}` is a 1×1 skew block and therefore zero, so
/// `[𝒢^{-2,2}, 𝒢^{-2,2}] = 0` and the second bracket step cannot reach
/// `𝒢^{-4,4}`: a form of drop exactly 4 survives into the second derived
/// system. In every other case with all `h^{p,q}` nonzero the containment
/// holds (verified by sweeping all `h^{p,q} ∈ {1,2}` through weight 8); the
/// termination bound of `check_flag_theorem` is unaffected either way.
pub fn containment_expected(lie: &GradedLie) -> bool {
    let n = lie.hodge().weight();
    !(n >= 6 && n % 2 == 0 && lie.hodge().h()[(n - 2) / 2] == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::HodgeNumbers;

    fn lie(w: usize, h: &[usize]) -> GradedLie {
        GradedLie::build(&HodgeNumbers::new(w, h.to_vec()).unwrap())
    }

    #[test]
    fn weight2_contact_system() {
        for k in 1..=3 {
            let flag = derived_flag(&lie(2, &[2, k, 2]));
            assert_eq!(flag.i_rank(), 1);
            assert_eq!(flag.i_dim(1), 0);
        }
    }

    #[test]
    fn weight3_two_step_flag() {
        for h in 1..=3 {
            let flag = derived_flag(&lie(3, &[1, h, h, 1]));
            assert_eq!(flag.i_rank(), h + 1);
            assert_eq!(flag.i_dim(1), 1);
            assert_eq!(flag.i_dim(2), 0);
        }
    }

    #[test]
    fn weight4_all_two() {
        let l = lie(4, &[2, 2, 2, 2, 2]);
        let rep = check_flag_theorem(&l);
        assert!(rep.containment_ok);
        assert!(rep.equality_expected);
        assert!(rep.equality_ok);
        assert!(rep.termination_ok);
        assert_eq!(rep.termination_bound, 2);
        // I_[1] = I(2): dual of grades 3 and 4
        let i1_expected = l.piece_dim(3) + l.piece_dim(4);
        assert_eq!(rep.flag.i_dim(1), i1_expected);
        assert_eq!(rep.flag.i_dim(2), 0);
    }

    #[test]
    fn flag_stabilizes_within_weight() {
        for (w, h) in [
            (2usize, vec![2, 3, 2]),
            (3, vec![1, 2, 2, 1]),
            (4, vec![1, 2, 2, 2, 1]),
            (5, vec![1, 1, 2, 2, 1, 1]),
        ] {
            let flag = derived_flag(&lie(w, &h));
            assert!(flag.stabilized_at <= w, "{h:?}");
        }
    }

    #[test]
    fn terminal_system_vanishes_for_positive_hodge_vectors() {
        for (w, h) in [
            (2usize, vec![1, 1, 1]),
            (3, vec![2, 1, 1, 2]),
            (4, vec![1, 2, 1, 2, 1]),
            (5, vec![2, 2, 2, 2, 2, 2]),
        ] {
            let flag = derived_flag(&lie(w, &h));
            assert_eq!(flag.terminal_dim, 0, "{h:?}");
        }
    }

    #[test]
    fn graded_compatibility_of_flag_spaces() {
        // W^[k] decomposes into its graded components
        let l = lie(4, &[1, 2, 2, 2, 1]);
        let flag = derived_flag(&l);
        for w in &flag.spaces {
            let mut graded_dim = 0;
            for r in 1..=4i64 {
                let off = l.nilpotent_offset(r);
                let d = l.piece_dim(r);
                let proj: Vec<Vec<crate::linalg::Scalar>> = w
                    .basis()
                    .iter()
                    .map(|v| {
                        let mut out = vec![num::Zero::zero(); l.nilpotent_dim()];
                        out[off..off + d].clone_from_slice(&v[off..off + d]);
                        out
                    })
                    .collect();
                graded_dim += Subspace::from_vectors(l.nilpotent_dim(), proj).dim();
            }
            assert_eq!(graded_dim, w.dim());
        }
    }

    #[test]
    fn weight6_thin_middle_breaks_containment() {
        // h^{4,2} = 1 zeroes the self-paired block of 𝒢^{-2,2}, so the
        // second bracket step misses 𝒢^{-4,4} and a drop-4 form stays in
        // the second derived system. Dimensions frozen from the graded
        // pieces 3, 2, 2, 1, 1: the flag climbs 3, 5, 7 and only then fills
        // the 9-dimensional nilpotent algebra.
        let l = lie(6, &[1, 1, 1, 1, 1, 1, 1]);
        assert!(!containment_expected(&l));
        let rep = check_flag_theorem(&l);
        assert!(rep.hypothesis_ok);
        assert!(!rep.containment_ok);
        assert!(rep.termination_ok);
        let dims: Vec<usize> = rep.flag.steps.iter().map(|s| s.w_dim).collect();
        assert_eq!(dims, vec![3, 5, 7, 9, 9]);
        assert!(l.horizontal_subsystem(4).dim() > rep.flag.spaces[2].dim());
    }

    #[test]
    fn containment_expected_matches_thin_middle_rule() {
        assert!(containment_expected(&lie(6, &[1, 1, 2, 1, 2, 1, 1])));
        assert!(!containment_expected(&lie(6, &[2, 2, 1, 2, 1, 2, 2])));
        assert!(containment_expected(&lie(5, &[1, 1, 1, 1, 1, 1])));
        assert!(containment_expected(&lie(4, &[1, 1, 1, 1, 1])));
        assert!(!containment_expected(&lie(8, &[2, 2, 2, 1, 2, 1, 2, 2, 2])));
    }

    #[test]
    fn special_case_top_one() {
        let rep = special_cases(&lie(4, &[1, 2, 2, 2, 1]));
        assert_eq!(rep.drop_full_trivial, Some(true));
        assert_eq!(rep.drop_full_dim, 0);
        assert!(rep.frozen_nonzero.is_none());
    }

    #[test]
    fn special_case_middle_zero() {
        let rep = special_cases(&lie(4, &[2, 2, 0, 2, 2]));
        assert_eq!(rep.frozen_nonzero, Some(true));
        assert!(rep.flag.terminal_dim > 0);
    }

    #[test]
    fn drop_full_nontrivial_for_larger_top() {
        let rep = special_cases(&lie(4, &[2, 2, 2, 2, 2]));
        // dual of 𝒢^{-4,4} has dimension C(2,2) = 1
        assert_eq!(rep.drop_full_dim, 1);
        assert!(rep.drop_full_trivial.is_none());
    }
}
