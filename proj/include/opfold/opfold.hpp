#pragma once

// Everything except serialize.hpp and runner.hpp, which also need json.hpp.

#include "opfold/rational.hpp"
#include "opfold/poly.hpp"
#include "opfold/matrix.hpp"
#include "opfold/banded.hpp"
#include "opfold/linsolve.hpp"
#include "opfold/measures.hpp"
#include "opfold/orthopoly.hpp"
#include "opfold/darboux.hpp"
#include "opfold/matfold.hpp"
#include "opfold/bispec.hpp"
