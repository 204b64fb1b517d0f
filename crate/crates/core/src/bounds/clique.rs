use serde::{Deserialize, Serialize};

use super::{ids, BoundParams, BoundReport, BoundWindow, Case};
use crate::error::{constraint, invalid, Result};
use crate::model::{alpha_exponents_at, Family, ModelSpec};

/// Two-sided Chernoff tail `exp(-eps^2 * mean / 4)` for a sum of independent
/// Bernoulli variables with the given mean, valid for `0 < eps < 1/6`.
pub fn chernoff_tail(epsilon: f64, mean: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0 / 6.0) {
        return Err(constraint(format!(
            "chernoff hypothesis violated: epsilon must lie in (0, 1/6), got {epsilon}"
        )));
    }
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(invalid(format!("mean must be a positive finite number, got {mean}")));
    }
    Ok((-epsilon * epsilon * mean / 4.0).exp())
}

fn check_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("n must be >= 2, got {n}")));
    }
    Ok(n as f64)
}

fn check_p(p: f64, name: &str) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in (0,1), got {p}")))
    }
}

/// Clique upper bound for arbitrary edge probabilities:
/// `P(omega <= u_n) >= 1 - exp(-f_n u_n)` with
/// `f_n = (u_n - 1)/2 * log(1/t_n) - log n`.
///
/// `log_inv_tn` may be `+inf` (a zero-probability pair in every set), in
/// which case the guarantee is 1.
pub fn clique_upper_inhom(n: usize, u_n: f64, log_inv_tn: f64) -> Result<BoundReport> {
    let nf = check_n(n)?;
    if !(u_n > 1.0) || !u_n.is_finite() {
        return Err(invalid(format!("u_n must be a finite real > 1, got {u_n}")));
    }
    if !(log_inv_tn >= 0.0) {
        return Err(invalid(format!("log(1/t_n) must be >= 0, got {log_inv_tn}")));
    }
    let f_n = (u_n - 1.0) / 2.0 * log_inv_tn - nf.ln();
    let failure = (-f_n * u_n).exp();
    Ok(
        BoundReport::new(ids::CLQ_UPPER_INHOM, n, u_n, "omega <= threshold", failure)
            .note(format!("f_n = {f_n}")),
    )
}

/// Homogeneous clique upper bound with
/// `U_n = (2 log n + 2 f_n)/log(1/p_n) + 1`.
pub fn clique_upper_hom(n: usize, p_n: f64, f_n: f64) -> Result<BoundReport> {
    let nf = check_n(n)?;
    check_p(p_n, "p_n")?;
    if !(f_n > 0.0) || !f_n.is_finite() {
        return Err(invalid(format!("f_n must be a positive finite number, got {f_n}")));
    }
    let u_n = (2.0 * nf.ln() + 2.0 * f_n) / (-p_n.ln()) + 1.0;
    let failure = (-f_n * u_n).exp();
    Ok(
        BoundReport::new(ids::CLQ_UPPER_HOM, n, u_n, "omega <= threshold", failure)
            .note(format!("f_n = {f_n}")),
    )
}

/// Lower clique bounds in the three regimes.
///
/// Threshold `(1 - eta) log n / log(1/p_n)` (cases i, ii) or
/// `(1 - alpha2 - eta) log n / log(1/p_n)` (case iii), guarantee
/// `1 - 3 exp(-n^e)` with `e = 2 eta - 2 gamma - alpha1`, `2 eta - 2 gamma`,
/// `2 eta - 2 gamma + alpha2` respectively.
pub fn clique_lower_main(
    case: Case,
    n: usize,
    p_n: f64,
    a: f64,
    params: &BoundParams,
) -> Result<BoundReport> {
    let nf = check_n(n)?;
    check_p(p_n, "p_n")?;
    if !(0.0..1.0).contains(&a) {
        return Err(invalid(format!("a must lie in [0,1), got {a}")));
    }
    let eta = params.require_positive("eta")?;
    let gamma = params.require_positive("gamma")?;
    let alpha = alpha_exponents_at(p_n, nf)?;
    let (a1, a2) = (alpha.alpha1, alpha.alpha2);
    let scale = nf.ln() / (-p_n.ln());

    let (id, threshold, exponent) = match case {
        Case::I => {
            if !(a1 > 0.0 && a1 < 2.0) {
                return Err(constraint(format!(
                    "case i requires 0 < alpha1 < 2, finite-n proxy alpha1 = {a1}"
                )));
            }
            if eta <= (a1 / 2.0).max(a) + gamma {
                return Err(constraint("clq_condi violated: eta <= max(alpha1/2,a)+gamma"));
            }
            if eta >= 1.0 {
                return Err(constraint("clq_condi violated: eta >= 1"));
            }
            (ids::CLQ_MAIN_I, (1.0 - eta) * scale, 2.0 * eta - 2.0 * gamma - a1)
        }
        Case::Ii => {
            if a >= gamma {
                return Err(constraint("clq_condii violated: a >= gamma"));
            }
            if gamma >= eta {
                return Err(constraint("clq_condii violated: gamma >= eta"));
            }
            if eta >= 1.0 {
                return Err(constraint("clq_condii violated: eta >= 1"));
            }
            (ids::CLQ_MAIN_II, (1.0 - eta) * scale, 2.0 * eta - 2.0 * gamma)
        }
        Case::Iii => {
            if !(a2 > 0.0 && a2 < 1.0) {
                return Err(constraint(format!(
                    "case iii requires 0 < alpha2 < 1, finite-n proxy alpha2 = {a2}"
                )));
            }
            if eta <= (gamma - a2 / 2.0).max(a) {
                return Err(constraint("clq_condiii violated: eta <= max(gamma-alpha2/2,a)"));
            }
            if eta >= 1.0 - a2 {
                return Err(constraint("clq_condiii violated: eta >= 1-alpha2"));
            }
            (
                ids::CLQ_MAIN_III,
                (1.0 - a2 - eta) * scale,
                2.0 * eta - 2.0 * gamma + a2,
            )
        }
    };
    let failure = 3.0 * (-nf.powf(exponent)).exp();
    let mut report = BoundReport::new(id, n, threshold, "omega >= threshold", failure)
        .with_alpha(alpha)
        .note(format!("exponent = {exponent}"))
        .note("alpha1/alpha2 are finite-n ratios standing in for limsup");
    if case == Case::Ii {
        report = report.note("alpha1 = alpha2 = 0 is a limiting hypothesis and is not checked at finite n");
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremeRegime {
    /// `alpha1 > 2`: the graph is empty (`omega = 1`).
    Alpha1Above2,
    /// `alpha2 > 2`: the graph is complete (`omega = n`).
    Alpha2Above2,
    /// `1 < alpha2 < 2`: `omega >= n - n^(2 - alpha2 + 2 eps)`.
    Alpha2Between1And2,
}

/// Very sparse and very dense homogeneous regimes.
pub fn extreme_regimes(n: usize, regime: ExtremeRegime, alpha: f64, epsilon: f64) -> Result<BoundReport> {
    let nf = check_n(n)?;
    if !(epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be > 0, got {epsilon}")));
    }
    match regime {
        ExtremeRegime::Alpha1Above2 => {
            if alpha - epsilon <= 2.0 {
                return Err(constraint("clq_extrem1 violated: alpha1-epsilon <= 2"));
            }
            let failure = nf.powf(-(alpha - epsilon - 2.0));
            Ok(BoundReport::new(ids::CLQ_EXTREM_1, n, 1.0, "omega = threshold", failure))
        }
        ExtremeRegime::Alpha2Above2 => {
            if alpha - epsilon <= 2.0 {
                return Err(constraint("clq_extrem2 violated: alpha2-epsilon <= 2"));
            }
            let failure = nf.powf(-(alpha - epsilon - 2.0));
            Ok(BoundReport::new(ids::CLQ_EXTREM_2, n, nf, "omega = threshold", failure))
        }
        ExtremeRegime::Alpha2Between1And2 => {
            if !(alpha > 1.0 && alpha < 2.0) {
                return Err(constraint(format!(
                    "clq_extrem3 violated: requires 1 < alpha2 < 2, got {alpha}"
                )));
            }
            let lo = 2.0 - alpha - 2.0 * epsilon;
            let hi = 2.0 - alpha + 2.0 * epsilon;
            if hi >= 1.0 {
                return Err(constraint(format!(
                    "clq_extrem3 violated: 2-alpha2+2epsilon = {hi} >= 1"
                )));
            }
            if lo <= 0.0 {
                return Err(constraint("clq_extrem3 violated: 2-alpha2-2epsilon <= 0"));
            }
            let threshold = nf - nf.powf(hi);
            let failure = (-nf.powf(lo)).exp();
            Ok(BoundReport::new(ids::CLQ_EXTREM_3, n, threshold, "omega >= threshold", failure))
        }
    }
}

/// Two-sided clique-number windows for the homogeneous families
/// (case i: `p_n = n^-theta1`, ii: constant `p`, iii: `p_n = 1 - n^-theta2`).
pub fn corollary_window(case: Case, model: &ModelSpec, params: &BoundParams) -> Result<BoundWindow> {
    let n = model.n;
    let nf = check_n(n)?;
    model.validate()?;
    let ln_n = nf.ln();
    let eta = params.require_positive("eta")?;
    let gamma = params.require_positive("gamma")?;
    let xi = params.require_positive("xi")?;
    let alpha = alpha_exponents_at(model.p_n()?, nf)?;

    let window = match (case, &model.family) {
        (Case::I, &Family::PowerLawSparse { theta1 }) => {
            if !(theta1 < 1.0) {
                return Err(constraint(format!("cor-i requires 0 < theta1 < 1, got {theta1}")));
            }
            if eta <= theta1 / 2.0 + gamma {
                return Err(constraint("cor-i violated: eta <= theta1/2+gamma"));
            }
            if eta >= 1.0 {
                return Err(constraint("cor-i violated: eta >= 1"));
            }
            let lower = BoundReport::new(
                ids::COR_I,
                n,
                (1.0 - eta) / theta1,
                "omega >= threshold",
                3.0 * (-nf.powf(2.0 * eta - 2.0 * gamma - theta1)).exp(),
            );
            let upper = BoundReport::new(
                ids::COR_I,
                n,
                (2.0 + xi) / theta1 + 1.0,
                "omega <= threshold",
                nf.powf(-xi * (2.0 + xi) / theta1),
            );
            BoundWindow::new(ids::COR_I, lower, upper)
        }
        (Case::Ii, &Family::Constant { p }) => {
            if gamma >= eta {
                return Err(constraint("cor-ii violated: gamma >= eta"));
            }
            if eta >= 1.0 {
                return Err(constraint("cor-ii violated: eta >= 1"));
            }
            let lp = -p.ln();
            let lower = BoundReport::new(
                ids::COR_II,
                n,
                (1.0 - eta) * ln_n / lp,
                "omega >= threshold",
                3.0 * (-nf.powf(2.0 * eta - 2.0 * gamma)).exp(),
            );
            let upper = BoundReport::new(
                ids::COR_II,
                n,
                (2.0 + xi) * ln_n / lp,
                "omega <= threshold",
                (-xi * (1.0 + xi) / lp * ln_n * ln_n).exp(),
            );
            BoundWindow::new(ids::COR_II, lower, upper)
        }
        (Case::Iii, &Family::NearComplete { theta2 }) => {
            if !(theta2 < 1.0) {
                return Err(constraint(format!("cor-iii requires 0 < theta2 < 1, got {theta2}")));
            }
            if eta <= gamma - theta2 / 2.0 {
                return Err(constraint("cor-iii violated: eta <= gamma-theta2/2"));
            }
            if eta >= 1.0 - theta2 {
                return Err(constraint("cor-iii violated: eta >= 1-theta2"));
            }
            let scale = nf.powf(theta2) * ln_n;
            let lower = BoundReport::new(
                ids::COR_III,
                n,
                (1.0 - theta2 - eta) * scale,
                "omega >= threshold",
                3.0 * (-nf.powf(2.0 * eta - 2.0 * gamma + theta2)).exp(),
            );
            let upper = BoundReport::new(
                ids::COR_III,
                n,
                (2.0 + xi) * scale,
                "omega <= threshold",
                (-xi * (1.0 + xi) * nf.powf(theta2) * ln_n * ln_n).exp(),
            );
            BoundWindow::new(ids::COR_III, lower, upper)
        }
        (case, family) => {
            return Err(invalid(format!(
                "case {} does not apply to the {} family",
                case.label(),
                family.name()
            )));
        }
    };
    let mut window = window;
    window.lower.alpha = Some(alpha);
    window.upper.alpha = Some(alpha);
    Ok(window)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn chernoff_values() {
        assert!(close(chernoff_tail(0.1, 1000.0).unwrap(), (-2.5f64).exp(), 1e-15));
        assert!(chernoff_tail(0.1, 1e-12).unwrap() > 1.0 - 1e-14);
        assert!(chernoff_tail(0.2, 100.0).unwrap_err().is_precondition());
        assert!(chernoff_tail(0.1, 0.0).is_err());
    }

    #[test]
    fn upper_inhom_example() {
        let r = clique_upper_inhom(100, 20.0, std::f64::consts::LN_2).unwrap();
        // f_n = 9.5 log 2 - log 100; exponent f_n * 20.
        let f_n = 9.5 * std::f64::consts::LN_2 - 100f64.ln();
        assert!(close(f_n, 1.979_728_029_331_389, 1e-12), "{f_n}");
        assert!(close(r.failure_raw, (-f_n * 20.0).exp(), 1e-12));
        assert!(!r.vacuous);
        assert_eq!(r.statement_id, "clq-upper-inhom");
    }

    #[test]
    fn upper_inhom_degenerate() {
        let r = clique_upper_inhom(100, 20.0, 0.0).unwrap();
        assert!(r.vacuous && r.guarantee_raw < 0.0);
        let r = clique_upper_inhom(100, 20.0, f64::INFINITY).unwrap();
        assert_eq!(r.guarantee_raw, 1.0);
        assert!(!r.vacuous);
    }

    #[test]
    fn upper_hom_examples() {
        let r = clique_upper_hom(100, 0.5, 100f64.ln()).unwrap();
        assert!(close(r.threshold, 27.575_424_759_098_9, 1e-12), "{}", r.threshold);
        assert!(close(-r.failure_raw.ln(), 126.989_523_966_560_1, 1e-10), "{}", -r.failure_raw.ln());

        let r = clique_upper_hom(30, 0.5, 30f64.ln()).unwrap();
        assert!(close(r.threshold, 20.627_562_382_434_07, 1e-12), "{}", r.threshold);
        assert_eq!(r.floor_threshold(), 20);
        assert!(-r.failure_raw.ln() > 70.0);

        // p_n -> 0 collapses the threshold toward 1.
        let r = clique_upper_hom(100, 1e-300, 1.0).unwrap();
        assert!(r.threshold < 1.02);
        assert!(clique_upper_hom(100, 1.0, 1.0).is_err());
    }

    #[test]
    fn lower_main_case_ii_example() {
        let p = BoundParams::with_eta_gamma(0.3, 0.1);
        let r = clique_lower_main(Case::Ii, 100, 0.5, 0.0, &p).unwrap();
        assert!(close(r.threshold, 4.650_699_332_842_307, 1e-12), "{}", r.threshold);
        assert!(close(r.guarantee_raw, 0.994_543_573_311_528, 1e-9), "{}", r.guarantee_raw);
    }

    #[test]
    fn lower_main_case_i_violation() {
        let p = BoundParams::with_eta_gamma(0.25, 0.1);
        // p_n = 100^-0.4 gives alpha1 = 0.4, so eta must exceed 0.3.
        let p_n = 100f64.powf(-0.4);
        let err = clique_lower_main(Case::I, 100, p_n, 0.0, &p).unwrap_err();
        assert_eq!(err.to_string(), "clq_condi violated: eta <= max(alpha1/2,a)+gamma");
        assert!(clique_lower_main(Case::I, 100, p_n, 0.0, &BoundParams::with_eta_gamma(0.5, 0.1)).is_ok());
    }

    #[test]
    fn lower_main_case_iii_example() {
        let n = 10_000usize;
        let p_n = 1.0 - (n as f64).powf(-0.5);
        let p = BoundParams::with_eta_gamma(0.4, 0.3);
        let r = clique_lower_main(Case::Iii, n, p_n, 0.0, &p).unwrap();
        let a2 = r.alpha.unwrap().alpha2;
        assert!(close(a2, 0.5, 1e-12));
        let want = (1.0 - a2 - 0.4) * (n as f64).ln() / (-p_n.ln());
        assert!(close(r.threshold, want, 1e-12));
        assert!(close(r.threshold, 91.642_115_310_677_78, 1e-9), "{}", r.threshold);
        let e: f64 = r.notes[0].trim_start_matches("exponent = ").parse().unwrap();
        assert!(close(e, 0.7, 1e-12));
    }

    #[test]
    fn extreme_examples() {
        let r = extreme_regimes(1000, ExtremeRegime::Alpha1Above2, 2.5, 0.1).unwrap();
        assert!(close(r.guarantee_raw, 0.936_904_265_551_980_7, 1e-12), "{}", r.guarantee_raw);
        let s = extreme_regimes(1000, ExtremeRegime::Alpha2Above2, 2.5, 0.1).unwrap();
        assert_eq!(s.guarantee_raw, r.guarantee_raw);
        assert_eq!(s.threshold, 1000.0);
        let err = extreme_regimes(1000, ExtremeRegime::Alpha2Between1And2, 1.5, 0.3).unwrap_err();
        assert!(err.to_string().contains("1.1"), "{err}");
        assert!(extreme_regimes(1000, ExtremeRegime::Alpha2Between1And2, 1.5, 0.1).is_ok());
    }

    #[test]
    fn corollary_examples() {
        let w = corollary_window(
            Case::Ii,
            &ModelSpec::constant(1000, 0.5),
            &BoundParams::with_eta_gamma(0.3, 0.1).xi(0.5),
        )
        .unwrap();
        assert!(close(w.lower.threshold, 6.976_048_999_263_461, 1e-12), "{}", w.lower.threshold);
        assert!(close(w.upper.threshold, 24.914_460_711_655_22, 1e-12), "{}", w.upper.threshold);

        let w = corollary_window(
            Case::I,
            &ModelSpec::power_law_sparse(100, 0.4),
            &BoundParams::with_eta_gamma(0.65, 0.1).xi(1.0),
        )
        .unwrap();
        assert!(close(w.lower.threshold, 0.875, 1e-14));
        assert!(close(w.upper.threshold, 8.5, 1e-14));

        let err = corollary_window(
            Case::Iii,
            &ModelSpec::near_complete(100, 0.5),
            &BoundParams::with_eta_gamma(0.5, 0.1).xi(1.0),
        )
        .unwrap_err();
        assert!(err.to_string().contains("eta >= 1-theta2"), "{err}");

        let err = corollary_window(
            Case::I,
            &ModelSpec::constant(100, 0.5),
            &BoundParams::with_eta_gamma(0.5, 0.1).xi(1.0),
        )
        .unwrap_err();
        assert!(err.to_string().contains("does not apply"), "{err}");
    }
}
