#pragma once

#include "linalg.hpp"
#include "realization.hpp"
#include "riccati.hpp"
#include "extension.hpp"
#include "reduction.hpp"
#include "scalar.hpp"
#include "realcase.hpp"
#include "io.hpp"
#include "cli.hpp"
