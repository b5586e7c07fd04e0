"""Memory-budgeted streaming testers for discrete distributions."""

from .collision import (CollisionStats, Flag, bipartite_collisions,
                        classify_bipartite, classify_pairwise,
                        pairwise_collisions)
from .distributions import (ExplicitDistribution, FlattenedView,
                            ReducedDistribution, distance_to_monotone,
                            distance_to_monotone_flattened, flatten,
                            flattened_distance_certificate, flattening_distance,
                            gen_half_uniform, gen_monotone, gen_no_instance,
                            gen_point_mass, gen_uniform, l2_norm_sq, reduce,
                            tv_distance)
from .oracles import (MemoryBudgetExceeded, MemoryLedger, PcondOracle,
                      Sampler, SampleStream, StreamExhausted, spawn_rngs)
from .partition import (BucketPartition, IntervalPartition, birge_partition,
                        bucketize, empirical_reduced, fine_partition, loglog)
from .sketch import CountMinSketch
from .testers import (CALIBRATED_CONSTANTS, DEFAULT_CONSTANTS, PROFILES,
                      CompareKind, CompareResult, ConfigError, Decision,
                      TesterConfig, Verdict, assess_partition_streaming,
                      bipartite_collision_monotonicity,
                      closeness_monotone_streaming, collision_monotonicity,
                      compare, identity_monotone_streaming,
                      learn_decomposable_streaming, pcond_identity_streaming,
                      streaming_monotonicity, test_decomposable_property)

__version__ = "0.1.0"
