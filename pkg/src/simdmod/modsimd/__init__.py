"""Lane-parallel modular kernels over numpy lane vectors."""

from simdmod.modsimd.kernels import (
    FixedTable,
    MultiBarrettContext,
    make_fixed_table,
    make_multi_barrett,
    vadd_mod,
    vadd_mod_float,
    vfloat_reduce_half,
    vmont_mul,
    vmul_mod_barrett,
    vmul_mod_fixed,
    vmul_mod_fma,
    vmul_mod_half,
    vneg_mod,
    vsub_mod,
    vsub_mod_float,
)
from simdmod.modsimd.lanes import (
    ALIGNMENT,
    LANE_DTYPES,
    REGISTER_BITS,
    U128,
    aligned_copy,
    aligned_empty,
    bias_cmpgt_u64,
    lane_count,
    lane_dtype,
    lanes,
)

__all__ = [name for name in dir() if not name.startswith("_")]
