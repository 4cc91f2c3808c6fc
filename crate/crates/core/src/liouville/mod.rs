//! Irrationality exponents and bases: continued-fraction estimators, the
//! super-Liouville tower `T = sum 1/T_n`, the Liouville number
//! `L = [0; 10^{1!}, 10^{2!}, ...]`, and closed-form bounds.

mod bounds;
mod cf;
mod estimate;
mod lnum;
mod tower;

pub use bounds::{
    chudnovsky_hata_bound, equivalent_exponent, evaluate_bounds, m_lambda_eps, mu_sigma_tau, theorem_bounds,
    BoundInputs, LOG_4_OVER_E, MU_UPPER_BRANCH, TWO_E,
};
pub use cf::{cf_convergents, cf_expand, cf_expand_rational, cf_value, convergent_pairs, determinants, ConvergentRecord};
pub use estimate::{beta_estimate, mu_estimate, EstimateSeries};
pub use lnum::{l_alpha, l_base_link, l_chain_start, l_convergents, l_pairs, l_quotients, verify_l_chain, LChain, L_DEPTH_CAP};
pub use tower::{
    beta_at_partial, tower_partial, tower_t, verify_super_liouville, PartialSum, TowerBeta, TowerInt, TOWER_DEPTH_CAP,
};
