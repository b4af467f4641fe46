#pragma once

// Umbrella header.

#include "cellsheaf/errors.hpp"
#include "cellsheaf/field.hpp"
#include "cellsheaf/matrix.hpp"
#include "cellsheaf/poset.hpp"
#include "cellsheaf/cw_complex.hpp"
#include "cellsheaf/parametrization.hpp"
#include "cellsheaf/cochain_complex.hpp"
#include "cellsheaf/sheaf.hpp"
#include "cellsheaf/cohomology.hpp"
#include "cellsheaf/equivalence.hpp"
#include "cellsheaf/morse.hpp"
#include "cellsheaf/parallel.hpp"
#include "cellsheaf/nerve.hpp"
#include "cellsheaf/io.hpp"
#include "cellsheaf/report.hpp"
#include "cellsheaf/families.hpp"
