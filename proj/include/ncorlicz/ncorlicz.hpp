#pragma once

#include "algebra.hpp"
#include "core_model.hpp"
#include "error.hpp"
#include "functorial.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "modular.hpp"
#include "orlicz_function.hpp"
#include "random.hpp"
#include "sampling.hpp"
#include "suite.hpp"
#include "trace_orlicz.hpp"
