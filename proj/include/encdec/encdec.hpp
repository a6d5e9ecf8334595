#pragma once

#include "encdec/common.hpp"
#include "encdec/rng.hpp"
#include "encdec/stats.hpp"
#include "encdec/state.hpp"
#include "encdec/circuit.hpp"
#include "encdec/noise.hpp"
#include "encdec/observables.hpp"
#include "encdec/pauli_transfer.hpp"

#include "encdec/theory/annealed.hpp"
#include "encdec/theory/critical.hpp"
#include "encdec/theory/disorder.hpp"
#include "encdec/theory/scaling.hpp"
#include "encdec/theory/slopes.hpp"
#include "encdec/theory/symmetric_group.hpp"
#include "encdec/theory/weingarten.hpp"

#include "encdec/harness/config.hpp"
#include "encdec/harness/worker_pool.hpp"
#include "encdec/harness/results.hpp"
#include "encdec/harness/pipeline.hpp"
#include "encdec/harness/noisy_device.hpp"
#include "encdec/harness/selfavg.hpp"
#include "encdec/harness/collapse.hpp"
#include "encdec/harness/theory_export.hpp"
#include "encdec/harness/io.hpp"
