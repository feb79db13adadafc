#pragma once

#include "cupform/analysis.hpp"
#include "cupform/error.hpp"
#include "cupform/form.hpp"
#include "cupform/geometry.hpp"
#include "cupform/json_io.hpp"
#include "cupform/monomial.hpp"
#include "cupform/rational.hpp"
#include "cupform/search.hpp"
#include "cupform/tensor.hpp"
#include "cupform/univariate.hpp"
