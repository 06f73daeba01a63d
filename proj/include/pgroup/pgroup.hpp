#pragma once

#include "acceptance.hpp"
#include "classifier.hpp"
#include "errors.hpp"
#include "explicit.hpp"
#include "families.hpp"
#include "group.hpp"
#include "invariants.hpp"
#include "isomorphism.hpp"
#include "lattice.hpp"
#include "min_degree.hpp"
#include "modular.hpp"
#include "presentation.hpp"
#include "structure.hpp"
#include "subgroup.hpp"
