use serde::{Deserialize, Serialize};

use super::BoundParams;

/// Parameter systems that [`find_feasible_params`] can solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasibleCase {
    #[serde(rename = "clq-i")]
    ClqI,
    #[serde(rename = "clq-ii")]
    ClqIi,
    #[serde(rename = "clq-iii")]
    ClqIii,
    #[serde(rename = "chr-i")]
    ChrI,
    #[serde(rename = "chr-ii")]
    ChrIi,
    #[serde(rename = "chr-iii")]
    ChrIii,
}

impl FeasibleCase {
    pub const ALL: [FeasibleCase; 6] = [
        FeasibleCase::ClqI,
        FeasibleCase::ClqIi,
        FeasibleCase::ClqIii,
        FeasibleCase::ChrI,
        FeasibleCase::ChrIi,
        FeasibleCase::ChrIii,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FeasibleCase::ClqI => "clq-i",
            FeasibleCase::ClqIi => "clq-ii",
            FeasibleCase::ClqIii => "clq-iii",
            FeasibleCase::ChrI => "chr-i",
            FeasibleCase::ChrIi => "chr-ii",
            FeasibleCase::ChrIii => "chr-iii",
        }
    }

    /// Checks `params` against the case's strict inequalities. On failure the
    /// error names the first inequality that does not hold.
    ///
    /// For the chromatic cases `alpha1` is read as the sparse exponent of the
    /// edge probability `r_n = n^-theta2` and `alpha2` as the exponent of
    /// `r_n = 1 - n^-theta1`.
    pub fn check(
        self,
        params: &BoundParams,
        alpha1: f64,
        alpha2: f64,
        a: f64,
    ) -> std::result::Result<(), String> {
        let get = |name: &str, v: Option<f64>| v.ok_or_else(|| format!("missing {name}"));
        let eta = get("eta", params.eta)?;
        let gamma = get("gamma", params.gamma)?;
        if !(gamma > 0.0) {
            return Err("gamma > 0".into());
        }
        if !(eta > 0.0) {
            return Err("eta > 0".into());
        }
        match self {
            FeasibleCase::ClqI => {
                if !(alpha1 > 0.0 && alpha1 < 2.0) {
                    return Err("0 < alpha1 < 2".into());
                }
                if !(eta > (alpha1 / 2.0).max(a) + gamma) {
                    return Err("eta > max(alpha1/2,a)+gamma".into());
                }
                if !(eta < 1.0) {
                    return Err("eta < 1".into());
                }
            }
            FeasibleCase::ClqIi => {
                if !(a < gamma) {
                    return Err("a < gamma".into());
                }
                if !(gamma < eta) {
                    return Err("gamma < eta".into());
                }
                if !(eta < 1.0) {
                    return Err("eta < 1".into());
                }
            }
            FeasibleCase::ClqIii => {
                if !(alpha2 > 0.0 && alpha2 < 1.0) {
                    return Err("0 < alpha2 < 1".into());
                }
                if !(eta > (gamma - alpha2 / 2.0).max(a)) {
                    return Err("eta > max(gamma-alpha2/2,a)".into());
                }
                if !(eta < 1.0 - alpha2) {
                    return Err("eta < 1-alpha2".into());
                }
            }
            FeasibleCase::ChrI => {
                let theta = alpha1;
                if !(theta > 0.0 && theta < 0.5) {
                    return Err("0 < theta2 < 1/2".into());
                }
                let beta = get("beta", params.beta)?;
                if !(beta > theta && beta < 1.0) {
                    return Err("theta2 < beta < 1".into());
                }
                let t22 = theta / (1.0 - beta);
                if !(eta > (1.0 - t22) / 2.0 + gamma) {
                    return Err("eta > (1-theta22)/2+gamma".into());
                }
                if !(eta < 1.0 - t22) {
                    return Err("eta < 1-theta22".into());
                }
            }
            FeasibleCase::ChrIi => {
                let beta = get("beta", params.beta)?;
                if !(beta > 0.0 && beta < 1.0) {
                    return Err("0 < beta < 1".into());
                }
                if !(eta > (1.0 + gamma) / 2.0) {
                    return Err("eta > (1+gamma)/2".into());
                }
                if !(eta < 1.0) {
                    return Err("eta < 1".into());
                }
            }
            FeasibleCase::ChrIii => {
                let theta = alpha2;
                if !(theta > 0.0 && theta < 1.0) {
                    return Err("0 < theta1 < 1".into());
                }
                let beta = get("beta", params.beta)?;
                if !(beta > 0.0 && beta < 1.0) {
                    return Err("0 < beta < 1".into());
                }
                if !(eta > (1.0 + theta) / 2.0 + gamma) {
                    return Err("eta > (1+theta1)/2+gamma".into());
                }
                if !(eta < 1.0) {
                    return Err("eta < 1".into());
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for FeasibleCase {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        FeasibleCase::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| crate::error::invalid(format!("unknown case {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Feasibility {
    Feasible { params: BoundParams },
    Infeasible { binding: String },
}

impl Feasibility {
    pub fn params(&self) -> Option<&BoundParams> {
        match self {
            Feasibility::Feasible { params } => Some(params),
            Feasibility::Infeasible { .. } => None,
        }
    }
}

/// Picks `(eta, gamma[, beta])` strictly inside the case's constraints:
/// `gamma` takes a quarter of the available gap and `eta` the midpoint of
/// what remains. The result is re-checked against [`FeasibleCase::check`].
pub fn find_feasible_params(case: FeasibleCase, alpha1: f64, alpha2: f64, a: f64) -> Feasibility {
    let infeasible = |b: &str| Feasibility::Infeasible { binding: b.to_string() };
    if ![alpha1, alpha2, a].iter().all(|x| x.is_finite()) {
        return infeasible("finite inputs");
    }
    // (lower end of the eta interval before gamma, upper end)
    let interval = |lo: f64, hi: f64| -> Option<(f64, f64)> {
        let gap = hi - lo;
        (gap > 0.0).then(|| {
            let gamma = gap / 4.0;
            (gamma, (lo + gamma + hi) / 2.0)
        })
    };
    let mut params = BoundParams::default();
    let pick = match case {
        FeasibleCase::ClqI => {
            if !(alpha1 > 0.0 && alpha1 < 2.0) {
                return infeasible("0 < alpha1 < 2");
            }
            interval((alpha1 / 2.0).max(a), 1.0).ok_or("eta < 1 with eta > max(alpha1/2,a)+gamma")
        }
        FeasibleCase::ClqIi => {
            let lo = a.max(0.0);
            let gap = 1.0 - lo;
            if gap > 0.0 {
                let gamma = lo + gap / 4.0;
                Ok((gamma, (gamma + 1.0) / 2.0))
            } else {
                Err("a < gamma < eta < 1")
            }
        }
        FeasibleCase::ClqIii => {
            if !(alpha2 > 0.0 && alpha2 < 1.0) {
                return infeasible("0 < alpha2 < 1");
            }
            let hi = 1.0 - alpha2;
            let lo = a.max(0.0);
            if hi > lo {
                let gamma = (hi - lo) / 4.0;
                let eta_lo = (gamma - alpha2 / 2.0).max(lo);
                Ok((gamma, (eta_lo + hi) / 2.0))
            } else {
                Err("eta < 1-alpha2 with eta > a")
            }
        }
        FeasibleCase::ChrI => {
            let theta = alpha1;
            if !(theta > 0.0 && theta < 0.5) {
                return infeasible("0 < theta2 < 1/2");
            }
            let beta = theta + (1.0 - 2.0 * theta) / 4.0;
            params.beta = Some(beta);
            let t22 = theta / (1.0 - beta);
            interval((1.0 - t22) / 2.0, 1.0 - t22).ok_or("eta < 1-theta22")
        }
        FeasibleCase::ChrIi => {
            params.beta = Some(0.25);
            let gamma = 0.25;
            Ok((gamma, ((1.0 + gamma) / 2.0 + 1.0) / 2.0))
        }
        FeasibleCase::ChrIii => {
            let theta = alpha2;
            if !(theta > 0.0 && theta < 1.0) {
                return infeasible("0 < theta1 < 1");
            }
            params.beta = Some(0.25);
            interval((1.0 + theta) / 2.0, 1.0).ok_or("eta < 1 with eta > (1+theta1)/2+gamma")
        }
    };
    match pick {
        Ok((gamma, eta)) => {
            params.gamma = Some(gamma);
            params.eta = Some(eta);
            params.a = Some(a);
            match case.check(&params, alpha1, alpha2, a) {
                Ok(()) => Feasibility::Feasible { params },
                Err(binding) => Feasibility::Infeasible { binding },
            }
        }
        Err(binding) => infeasible(binding),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clq_i_example() {
        let f = find_feasible_params(FeasibleCase::ClqI, 0.4, 0.0, 0.0);
        let p = f.params().unwrap();
        let (eta, gamma) = (p.eta.unwrap(), p.gamma.unwrap());
        assert!(0.2 + gamma < eta && eta < 1.0);
        assert_eq!(gamma, 0.2);
        assert!((eta - 0.7).abs() < 1e-15);
    }

    #[test]
    fn clq_i_out_of_range() {
        assert_eq!(
            find_feasible_params(FeasibleCase::ClqI, 2.5, 0.0, 0.0),
            Feasibility::Infeasible { binding: "0 < alpha1 < 2".into() }
        );
    }

    #[test]
    fn clq_iii_example() {
        let f = find_feasible_params(FeasibleCase::ClqIii, 0.0, 0.5, 0.0);
        let p = f.params().unwrap();
        let (eta, gamma) = (p.eta.unwrap(), p.gamma.unwrap());
        assert!(eta < 0.5 && (gamma - 0.25).max(0.0) < eta);
    }

    #[test]
    fn large_a_is_binding() {
        let f = find_feasible_params(FeasibleCase::ClqIi, 0.0, 0.0, 1.0);
        assert!(matches!(f, Feasibility::Infeasible { .. }));
        let f = find_feasible_params(FeasibleCase::ClqIii, 0.0, 0.5, 0.6);
        assert!(matches!(f, Feasibility::Infeasible { .. }));
    }

    #[test]
    fn chromatic_cases() {
        for (case, a1, a2) in [
            (FeasibleCase::ChrI, 0.3, 0.0),
            (FeasibleCase::ChrIi, 0.0, 0.0),
            (FeasibleCase::ChrIii, 0.0, 0.5),
        ] {
            let f = find_feasible_params(case, a1, a2, 0.0);
            let p = f.params().unwrap_or_else(|| panic!("{case:?}: {f:?}"));
            assert!(p.beta.is_some());
            assert_eq!(case.check(p, a1, a2, 0.0), Ok(()));
        }
        assert!(find_feasible_params(FeasibleCase::ChrI, 0.6, 0.0, 0.0).params().is_none());
    }

    #[test]
    fn json_shape() {
        let f = find_feasible_params(FeasibleCase::ClqIi, 0.0, 0.0, 0.0);
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["status"], "feasible");
        assert_eq!(v["params"]["gamma"], 0.25);
        let f = find_feasible_params(FeasibleCase::ClqI, 3.0, 0.0, 0.0);
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["status"], "infeasible");
    }
}
