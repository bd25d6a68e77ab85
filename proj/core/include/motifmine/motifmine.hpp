#pragma once

#include "motifmine/assignment.hpp"
#include "motifmine/baseline.hpp"
#include "motifmine/dataset.hpp"
#include "motifmine/decoder.hpp"
#include "motifmine/density.hpp"
#include "motifmine/errors.hpp"
#include "motifmine/eval.hpp"
#include "motifmine/features.hpp"
#include "motifmine/generators.hpp"
#include "motifmine/graph.hpp"
#include "motifmine/kernel.hpp"
#include "motifmine/lap.hpp"
#include "motifmine/miner.hpp"
#include "motifmine/nn.hpp"
#include "motifmine/pipeline.hpp"
#include "motifmine/random.hpp"
#include "motifmine/training.hpp"
#include "motifmine/transport.hpp"
