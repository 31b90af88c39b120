"""Level statistics of quantized integrable maps with exact, reproducible reductions."""

__version__ = "0.1.0"

from .errors import DomainError, PreconditionError, SizeError, SpecgapError
from .poly import Poly
from .phase import (
    FamilyPoint, Phase, Spectrum, cycle_phases, eval_phase, family_phase,
    mean_value_point, picket_fence, spectrum,
)
from .expsum import (
    TraceTable, exp_sum, gauss_sum_direct, gauss_sum_exact, hilbert_average,
    spectrum_traces, trace_table,
)
from .windows import Window, custom, fejer, gaussian
from .stats import (
    StatisticEstimate, dos_empirical, dos_limit, gap_spectrum, number_variance_direct,
    number_variance_spectral, pcf_direct, pcf_spectral, poisson_reference,
)
from .averaging import gauss_legendre_average, time_averaged_nv, time_averaged_pcf
from .classical import (
    ClassicalPCF, correlation_volume, hamiltonian_pcf_empirical, period, theorem_a_pcf,
)
from .experiments import (
    LatticeCount, SweepResult, lattice_count_bruteforce, lattice_count_fast,
    param_sweep, planck_subsequence, quadratic_IN, quadratic_time_average,
)
