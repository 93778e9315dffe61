"""Condorcet attack simulation and batch ordering for batch-order-fair transaction ordering."""

from .attack import AttackPlan, clone_plan, four_tx_plan, reverse_orderings, schedule, two_tx_plan
from .batchorder import (
    BatchScheme,
    dependency_groups,
    final_ordering,
    hamiltonian_path,
    order_alphabetical,
    order_hamiltonian,
    order_post_decryption,
    order_ranked_pairs,
)
from .depgraph import Condensation, WeightedTournament, build_tournament, condorcet_cycles, scc_decompose
from .metrics import cycle_stats, pair_accuracy, success, trapped_honest
from .model import LocalOrdering, Origin, Partition, Transaction, ground_truth_order
from .netsim import AttackConfig, SimConfig, SimResult, attack_run_pair, run

__version__ = "0.1.0"
