#pragma once

// Gadget-dump analysis: parse textual ROP gadget dumps and compute
// category distributions, environment-setup capability, restricted-
// scenario usefulness, per-gadget quality scores, and corpus-to-corpus
// comparison reports.

#include "ropscore/categories.hpp"
#include "ropscore/config.hpp"
#include "ropscore/distribution.hpp"
#include "ropscore/effects.hpp"
#include "ropscore/errors.hpp"
#include "ropscore/instruction.hpp"
#include "ropscore/parse.hpp"
#include "ropscore/quality.hpp"
#include "ropscore/registers.hpp"
#include "ropscore/render.hpp"
#include "ropscore/report.hpp"
#include "ropscore/setup.hpp"
