#pragma once

// Partial model theory at finite scale: partial structures, quasi-truth,
// products, reduced products and ultraproducts, and a compactness
// construction over finite index sets.

#include "pmt/errors.hpp"
#include "pmt/filter.hpp"
#include "pmt/formula.hpp"
#include "pmt/generators.hpp"
#include "pmt/io.hpp"
#include "pmt/parser.hpp"
#include "pmt/product.hpp"
#include "pmt/relation.hpp"
#include "pmt/semantics.hpp"
#include "pmt/signature.hpp"
#include "pmt/structure.hpp"
#include "pmt/suite.hpp"
#include "pmt/universe.hpp"
#include "pmt/verdict.hpp"
