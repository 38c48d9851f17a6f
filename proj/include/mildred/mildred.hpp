#pragma once

// Everything except the command line front end.

#include "mildred/error.hpp"
#include "mildred/rational.hpp"
#include "mildred/finite_field.hpp"
#include "mildred/polynomial.hpp"
#include "mildred/rational_function.hpp"
#include "mildred/series.hpp"
#include "mildred/superelliptic.hpp"
#include "mildred/deformation_data.hpp"
#include "mildred/tree_calculus.hpp"
#include "mildred/tail_covers.hpp"
#include "mildred/lifting_arith.hpp"
#include "mildred/dessins.hpp"
