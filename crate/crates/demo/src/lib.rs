//! Browser bindings for the demo page: thin JSON-string wrappers over
//! the library. Every function returns either the result object or
//! `{"error": "..."}`, so the page never needs try/catch around calls.

use relcass::cone::{box_scan_oracle, containment_check};
use relcass::report::{build_datum, certificate_json, cone_pair_json};
use relcass::root::{
    case_classify, double_coset_reps, levi_intersection, CosetCase, RootDatum, SimpleSubset,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

fn maximal(m: usize, cut: usize) -> Result<SimpleSubset, String> {
    if !(2..=10).contains(&m) {
        return Err("m must be between 2 and 10".into());
    }
    if cut == 0 || cut >= m {
        return Err(format!("the cut must be between 1 and {}", m - 1));
    }
    Ok(RootDatum::new(m).maximal_subset(cut - 1))
}

/// Minimal double-coset representatives for a pair of maximal block
/// parabolics of GL_m, cut at the 1-based simple roots given.
#[wasm_bindgen]
pub fn coset_explorer(m: usize, theta_cut: usize, omega_cut: usize) -> String {
    let inner = || -> Result<String, String> {
        let theta = maximal(m, theta_cut)?;
        let omega = maximal(m, omega_cut)?;
        let reps = double_coset_reps(m, &theta, &omega)
            .into_iter()
            .map(|w| {
                let case = case_classify(&w, &theta, &omega).map_err(|e| e.to_string())?;
                let inter = levi_intersection(&w, &theta, &omega).map_err(|e| e.to_string())?;
                Ok(json!({
                    "w": w.one_line(),
                    "length": w.length(),
                    "case": case,
                    "intersection": inter.iter().map(|i| i + 1).collect::<Vec<_>>(),
                }))
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(serde_json::to_string_pretty(&json!({
            "m": m,
            "count": reps.len(),
            "representatives": reps,
        }))
        .unwrap())
    };
    inner().unwrap_or_else(err)
}

/// Every second-case containment for the chosen pair, with the full
/// multiplier certificate and the lattice oracle's verdict.
#[wasm_bindgen]
pub fn cone_certificates(m: usize, theta_cut: usize, omega_cut: usize) -> String {
    let inner = || -> Result<String, String> {
        let theta = maximal(m, theta_cut)?;
        let omega = maximal(m, omega_cut)?;
        let mut pairs = Vec::new();
        for w in double_coset_reps(m, &theta, &omega) {
            if case_classify(&w, &theta, &omega).map_err(|e| e.to_string())?
                == CosetCase::Case1
            {
                continue;
            }
            let (inst, data) =
                containment_check(m, &theta, &w, &omega).map_err(|e| e.to_string())?;
            let scan = box_scan_oracle(&inst, 3);
            pairs.push(cone_pair_json(&inst, &data, &scan));
        }
        Ok(serde_json::to_string_pretty(&json!({
            "m": m,
            "second_case_instances": pairs,
        }))
        .unwrap())
    };
    inner().unwrap_or_else(err)
}

/// Run the square-integrability certifier for GL_rank with the given
/// inducing factor and Galois pairing.
#[wasm_bindgen]
pub fn certify(rank: usize, tau: &str, sigma_pairs: &str) -> String {
    let inner = || -> Result<String, String> {
        if rank % 2 != 0 || !(4..=10).contains(&rank) {
            return Err(format!(
                "rank must be even and between 4 and 10, got {rank}"
            ));
        }
        let datum = build_datum(rank / 2, tau, sigma_pairs).map_err(|e| e.to_string())?;
        let cert = relcass::certify::certify_rds(&datum).map_err(|e| e.to_string())?;
        Ok(serde_json::to_string_pretty(&certificate_json(&cert)).unwrap())
    };
    inner().unwrap_or_else(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn coset_explorer_emits_valid_json() {
        let out: Value = serde_json::from_str(&coset_explorer(4, 2, 2)).unwrap();
        assert_eq!(out["count"], 3);
        let reps = out["representatives"].as_array().unwrap();
        assert_eq!(reps[0]["w"], "[1 2 3 4]");
        assert!(coset_explorer(4, 0, 2).contains("error"));
        assert!(coset_explorer(40, 2, 2).contains("error"));
    }

    #[test]
    fn cone_certificates_hold() {
        let out: Value = serde_json::from_str(&cone_certificates(4, 1, 2)).unwrap();
        let pairs = out["second_case_instances"].as_array().unwrap();
        assert!(!pairs.is_empty());
        for pair in pairs {
            assert_eq!(pair["verdict"], "contained-strictly");
        }
    }

    #[test]
    fn certify_round_trips() {
        let out: Value =
            serde_json::from_str(&certify(4, "steinberg:k=2,rho=chi1", "chi1:chi2")).unwrap();
        assert_eq!(out["rds"], Value::Bool(true));
        let not: Value =
            serde_json::from_str(&certify(4, "steinberg:k=2,rho=chi1", "chi1")).unwrap();
        assert_eq!(not["rds"], Value::Bool(false));
        assert!(certify(5, "steinberg:k=1,rho=a", "").contains("error"));
        assert!(certify(4, "nonsense", "").contains("error"));
    }
}
