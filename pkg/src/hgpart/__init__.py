"""Multilevel n-level hypergraph bipartitioning toolkit.

Core pipeline: reversible heavy-edge coarsening with an optional adaptive
stopping rule, initial partitioning by a constructive portfolio ("pool") or
a memetic (mu+lambda) evolutionary algorithm, and Fiduccia-Mattheyses
refinement during uncoarsening.  A statistics harness (Simpson AUC,
Wilcoxon tests, threshold sweeps, landscape sampling) supports experiments.
"""

from .coarsening import (CoarseningConfig, CoarseningMonitor, ContractionMemento,
                         coarsen, contract, monitor_step, rate_pair,
                         select_contraction_partner, uncontract)
from .core import (DenseView, Hypergraph, Partition, PartitionConfig, cut_size,
                   imbalance, is_feasible, km1, parse_hmetis, read_partition,
                   write_hmetis, write_partition)
from .driver import DriverConfig, RunReport, partition, uncoarsen_refine
from .ea import (EaConfig, EaResult, Individual, ea_run, mutate, mutation_ladder,
                 normalize_crossover, repair, seed_population)
from .fm import FmConfig, fm_pass, fm_refine, gain
from .landscape import (FdcModel, LocalOptimumRecord, export_landscape, fdc_fit,
                        landscape_distances, sample_local_optima, scaled_distance)
from .pool import (PoolConfig, PoolResult, bfs_partition, greedy_growing_partition,
                   label_propagation_partition, pool_run, random_partition)
from .stats import simpson_auc, wilcoxon
from .sweep import SweepSpec, default_threshold_grid, sweep
from .synthetic import SyntheticSpec, gen_synthetic

__version__ = "0.1.0"
