#pragma once

// Umbrella header: the whole library, transport and streaming included.

#include "milo/csv.hpp"
#include "milo/envelope.hpp"
#include "milo/error.hpp"
#include "milo/json.hpp"
#include "milo/metrics.hpp"
#include "milo/models/dataset.hpp"
#include "milo/models/decision_tree.hpp"
#include "milo/models/gaussian_nb.hpp"
#include "milo/models/kmeans.hpp"
#include "milo/models/linear_regression.hpp"
#include "milo/models/logistic_regression.hpp"
#include "milo/models/model.hpp"
#include "milo/node.hpp"
#include "milo/ordered_dict.hpp"
#include "milo/qc.hpp"
#include "milo/signing.hpp"
#include "milo/state.hpp"
#include "milo/streaming.hpp"
#include "milo/synth.hpp"
#include "milo/tensor.hpp"
#include "milo/transport.hpp"
#include "milo/transporters.hpp"
#include "milo/version.hpp"
