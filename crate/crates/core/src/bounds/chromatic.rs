use super::{ids, BoundParams, BoundReport, BoundWindow, Case};
use crate::error::{constraint, invalid, Result};
use crate::model::{alpha_exponents_at, Family, ModelSpec};

/// Chromatic-number windows for homogeneous graphs with edge probability
/// `r_n`:
///
/// * case i: `r_n = n^-theta` with `0 < theta < 1/2` (`power-law-sparse`, exponent in `theta1`);
/// * case ii: constant `r_n = p`;
/// * case iii: `r_n = 1 - n^-theta` with `0 < theta < 1` (`near-complete`, exponent in `theta2`).
///
/// All cases need `xi, zeta > 0`. The case-iii failure term involves `eta`
/// and `gamma`, which the statement leaves unquantified; the caller supplies
/// them and the report records that.
pub fn chromatic_window(case: Case, model: &ModelSpec, params: &BoundParams) -> Result<BoundWindow> {
    let n = model.n;
    model.validate()?;
    let nf = n as f64;
    let ln_n = nf.ln();
    let xi = params.require_positive("xi")?;
    let zeta = params.require_positive("zeta")?;
    let alpha = alpha_exponents_at(model.p_n()?, nf)?;

    let mut window = match (case, &model.family) {
        (Case::I, &Family::PowerLawSparse { theta1: theta }) => {
            if !(theta < 0.5) {
                return Err(constraint(format!(
                    "chr-i hypothesis violated: requires 0 < theta2 < 1/2, got {theta}"
                )));
            }
            let scale = nf.powf(1.0 - theta) / ln_n;
            let lower = BoundReport::new(
                ids::CHR_I,
                n,
                (1.0 - xi) * scale / 2.0,
                "chi >= threshold",
                (-xi * (1.0 + xi) * nf.powf(theta) * ln_n * ln_n).exp(),
            );
            let upper = BoundReport::new(
                ids::CHR_I,
                n,
                2.0 * (1.0 + xi) / (1.0 - 2.0 * theta) * scale,
                "chi <= threshold",
                3.0 * (-nf.powf(1.0 - theta - zeta)).exp(),
            );
            BoundWindow::new(ids::CHR_I, lower, upper)
        }
        (Case::Ii, &Family::Constant { p }) => {
            let lq = -(-p).ln_1p();
            let lower = BoundReport::new(
                ids::CHR_II,
                n,
                (1.0 - xi) * nf * lq / (2.0 * ln_n),
                "chi >= threshold",
                (-xi * (1.0 + xi) / lq * ln_n * ln_n).exp(),
            );
            let upper = BoundReport::new(
                ids::CHR_II,
                n,
                2.0 * (1.0 + xi) * nf * lq / ln_n,
                "chi <= threshold",
                3.0 * (-nf.powf(1.0 - zeta)).exp(),
            );
            BoundWindow::new(ids::CHR_II, lower, upper)
        }
        (Case::Iii, &Family::NearComplete { theta2: theta }) => {
            if !(theta < 1.0) {
                return Err(constraint(format!(
                    "chr-iii hypothesis violated: requires 0 < theta1 < 1, got {theta}"
                )));
            }
            let eta = params.require_positive("eta")?;
            let gamma = params.require_positive("gamma")?;
            let lower = BoundReport::new(
                ids::CHR_III,
                n,
                (1.0 - xi) * theta * nf / (2.0 + theta),
                "chi >= threshold",
                nf.powf(-xi * (1.0 + xi) / theta),
            );
            let upper = BoundReport::new(
                ids::CHR_III,
                n,
                (1.0 + xi) * 2.0 * theta * nf / (1.0 - theta),
                "chi <= threshold",
                3.0 * (-nf.powf(2.0 * eta - 2.0 * gamma - theta)).exp(),
            )
            .note("failure term uses caller-supplied eta, gamma (not quantified by the statement)");
            BoundWindow::new(ids::CHR_III, lower, upper)
        }
        (case, family) => {
            return Err(invalid(format!(
                "case {} does not apply to the {} family",
                case.label(),
                family.name()
            )));
        }
    };
    window.lower.alpha = Some(alpha);
    window.upper.alpha = Some(alpha);
    if case == Case::Iii {
        window.notes.push("eta, gamma supplied by caller".to_string());
    }
    Ok(window)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn case_ii_windows() {
        let p = BoundParams::default().xi(0.1).zeta(0.5);
        let w = chromatic_window(Case::Ii, &ModelSpec::constant(1000, 0.5), &p).unwrap();
        assert!(close(w.lower.threshold, 45.154_499_349_597_18, 1e-12), "{}", w.lower.threshold);
        assert!(close(w.upper.threshold, 220.755_330_153_586_2, 1e-12), "{}", w.upper.threshold);

        let p = BoundParams::default().xi(0.5).zeta(0.5);
        let w = chromatic_window(Case::Ii, &ModelSpec::constant(500, 0.5), &p).unwrap();
        assert!(close(w.lower.threshold, 13.941_892_424_719_557, 1e-12));
        assert!(close(w.upper.threshold, 167.302_709_096_634_7, 1e-12));
        assert!(close(w.failure_raw, 5.834_470_084_047_987e-10, 1e-9), "{}", w.failure_raw);
        assert_eq!(w.integer_window(), (14, 167));
    }

    #[test]
    fn case_iii_linear_window() {
        let mut p = BoundParams::with_eta_gamma(0.9, 0.05).xi(0.2).zeta(0.1);
        let n = 1000;
        let w = chromatic_window(Case::Iii, &ModelSpec::near_complete(n, 0.5), &p).unwrap();
        assert!(close(w.lower.threshold, 0.16 * n as f64, 1e-12));
        assert!(close(w.upper.threshold, 2.4 * n as f64, 1e-12));
        p.eta = None;
        assert!(chromatic_window(Case::Iii, &ModelSpec::near_complete(n, 0.5), &p).is_err());
    }

    #[test]
    fn case_i_hypothesis() {
        let p = BoundParams::default().xi(0.5).zeta(0.5);
        let err = chromatic_window(Case::I, &ModelSpec::power_law_sparse(100, 0.6), &p).unwrap_err();
        assert!(err.is_precondition());
        assert!(err.to_string().contains("1/2"), "{err}");
        let w = chromatic_window(Case::I, &ModelSpec::power_law_sparse(100, 0.3), &p).unwrap();
        assert!(w.lower.threshold < w.upper.threshold);
    }
}
