#pragma once

#include "predrisk/admissibility.hpp"
#include "predrisk/errors.hpp"
#include "predrisk/grid.hpp"
#include "predrisk/inference.hpp"
#include "predrisk/model.hpp"
#include "predrisk/modelspec.hpp"
#include "predrisk/numeric.hpp"
#include "predrisk/risk.hpp"
#include "predrisk/ruleopt.hpp"
