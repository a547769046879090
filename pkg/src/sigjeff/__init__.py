"""Significance testing of joint (pairwise) variable effects for binary classification."""

__version__ = "0.1.0"

from .errors import IllPosedInputError, NumericalError, SigJEffError
from .evaluate import fdp_curve, lda_error, true_nonnull_curve
from .fdr import FdrTable, estimate_fdr, estimate_pi0
from .io import load_csv, write_csv
from .marginal import prescreen_by_sd, rank_marginal
from .partition import (Partition, pair_count_fast, partition,
                        partition_exhaustive, partition_fast)
from .permutation import (PermutationConfig, PermutationResult, RankedList,
                          pvalue_empirical, pvalue_gaussian, rank_pairs,
                          run_permutations)
from .pipeline import PipelineConfig, Report, run_pipeline, write_report
from .simdata import GroundTruth, SimSpec, generate
from .stats import (LabeledMatrix, PairStat, TwoSampleSummary,
                    mahalanobis_pair, mahalanobis_single, summarize)
