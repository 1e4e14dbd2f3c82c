#pragma once

#include "wrearr/extended.hpp"
#include "wrearr/errors.hpp"
#include "wrearr/stepfn.hpp"
#include "wrearr/matrix.hpp"
#include "wrearr/orlicz.hpp"
#include "wrearr/algebra.hpp"
#include "wrearr/weighted.hpp"
#include "wrearr/norms.hpp"
#include "wrearr/random.hpp"
