#pragma once

#include "bol/error.hpp"
#include "bol/point.hpp"
#include "bol/numeric.hpp"
#include "bol/jacobi.hpp"
#include "bol/growth.hpp"
#include "bol/growth_id.hpp"
#include "bol/measure.hpp"
#include "bol/mobius.hpp"
#include "bol/series.hpp"
#include "bol/holo.hpp"
#include "bol/norms.hpp"
#include "bol/operators.hpp"
#include "bol/report.hpp"
#include "bol/harness.hpp"
#include "bol/spec_io.hpp"
#include "bol/config.hpp"
