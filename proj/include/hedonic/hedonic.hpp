#pragma once

#include "hedonic/auditor.hpp"
#include "hedonic/canonical.hpp"
#include "hedonic/core.hpp"
#include "hedonic/errors.hpp"
#include "hedonic/generators.hpp"
#include "hedonic/matching.hpp"
#include "hedonic/mechanisms.hpp"
#include "hedonic/random.hpp"
#include "hedonic/rational.hpp"
#include "hedonic/solvers.hpp"
