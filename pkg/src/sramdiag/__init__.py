"""Behavioral simulator and cost model for shared-controller diagnosis of
clusters of small embedded SRAMs through per-memory SPC/PSC pairs."""

from .analysis import (AreaCostTable, CostInputs, area_report, cost_report, estimate_k,
                       reduction_no_drf, reduction_with_drf, t_baseline, t_proposed)
from .controller import (ClusterConfig, DiagnosisRecord, Mode, RunResult, background_bit,
                         expected_read, run_diagnosis)
from .march import (MarchAlgorithm, MarchElement, MarchOp, format_march, march_c_minus,
                    march_cw, merge_nwrtm, parse_march)
from .memory_model import FaultDescriptor, FaultKind, MemoryGeometry, MemoryInstance

__version__ = "0.1.0"
