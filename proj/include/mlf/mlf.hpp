#pragma once

#include "mlf/errors.hpp"
#include "mlf/gamma.hpp"
#include "mlf/series.hpp"
#include "mlf/calculus.hpp"
#include "mlf/semigroup.hpp"
#include "mlf/matrix.hpp"
#include "mlf/io.hpp"
