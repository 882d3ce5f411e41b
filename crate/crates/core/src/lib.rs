//! Constant-query testing of the Bradley–Terry condition on stochastic
//! tournaments, plus repair, score fitting, spanning-tree extension and
//! generators.
//!
//! A stochastic tournament assigns to every pair `x, y` a probability
//! `p_xy = 1 − p_yx`. The following are equivalent:
//!
//! 1. there are scores `a(x) > 0` with `p_xy / p_yx = a(x) / a(y)`;
//! 2. the Markov chain `q_xy = p_xy / n` is reversible;
//! 3. every triangle is balanced, `p_xy p_yz p_zx = p_xz p_zy p_yx`;
//! 4. every triangle through one fixed vertex is balanced.
//!
//! [`tester::test_bt`] samples `O(1/ε)` triangles and accepts iff all are
//! balanced.
//!
//! ```
//! use btprop_core::{gen_bt, gen_cyclic, test_bt, ScoreVector, TesterConfig};
//!
//! let bt = gen_bt(&ScoreVector::new(vec![1.0, 2.0, 4.0, 0.5]).unwrap()).unwrap();
//! assert!(test_bt(&bt, &TesterConfig::new(0.1)).unwrap().accepted());
//!
//! let cyclic = gen_cyclic(3, 0.9).unwrap();
//! assert!(!test_bt(&cyclic, &TesterConfig::new(0.5)).unwrap().accepted());
//! ```

pub mod approx;
pub mod balance;
pub mod cycles;
pub mod distance;
pub mod error;
pub mod extend;
pub mod fit;
pub mod format;
pub mod generate;
pub mod numeric;
pub mod repair;
pub mod tester;
pub mod tournament;
pub mod tree;

pub use approx::{
    check_seven_eps, min_approx_bt_eps, scores_from_root, scores_to_stationary, verify_approx_bt,
};
pub use balance::{
    discrepancy, is_balanced, is_eps_balanced, total_discrepancy, triangle_ratio, BalancePredicate,
    Discrepancy, DiscrepancySums, Triangle,
};
pub use cycles::{
    check_fundamental_cycles, cycle_ratio, is_cycle_balanced, CycleChain, DirectedCycle,
};
pub use distance::{l1_distance_oracle, DistanceBounds};
pub use error::{Error, Result};
pub use extend::{extend_tree, Extension, TreeWeights};
pub use fit::fit_scores_least_squares;
pub use format::TournamentFile;
pub use generate::{gen_bt, gen_cyclic, gen_perturbed, gen_random, RNG_ALGORITHM};
pub use repair::{best_root, repair, repair_with_root, RepairReport};
pub use tester::{
    estimate_unbalanced_fraction, sample_size, test_bt, Outcome, TestVerdict, TesterConfig,
};
pub use tournament::{
    check_reversible, MarkovMatrix, PairwiseOracle, ScoreVector, StationaryDistribution,
    StochasticTournament, DEFAULT_FLOOR, DEFAULT_TOL,
};
pub use tree::SpanningTree;
