#pragma once

// Everything except the benchmark plumbing under apcg/bench.

#include "apcg/core/block_partition.hpp"
#include "apcg/core/errors.hpp"
#include "apcg/core/oracles.hpp"
#include "apcg/core/regularizers.hpp"
#include "apcg/core/rng.hpp"
#include "apcg/core/vector_ops.hpp"
#include "apcg/core/weighted_norm.hpp"
#include "apcg/data/libsvm.hpp"
#include "apcg/data/sparse.hpp"
#include "apcg/data/stats.hpp"
#include "apcg/data/synthetic.hpp"
#include "apcg/problems/quadratic.hpp"
#include "apcg/problems/relocation.hpp"
#include "apcg/solver/diagnostics.hpp"
#include "apcg/solver/efficient.hpp"
#include "apcg/solver/explicit.hpp"
#include "apcg/solver/schedule.hpp"
#include "apcg/solver/solve.hpp"
#include "apcg/erm/apcg_erm.hpp"
#include "apcg/erm/certify.hpp"
#include "apcg/erm/losses.hpp"
#include "apcg/erm/oracles.hpp"
#include "apcg/erm/problem.hpp"
#include "apcg/baselines/afg.hpp"
#include "apcg/baselines/rpcg.hpp"
#include "apcg/baselines/sdca.hpp"
