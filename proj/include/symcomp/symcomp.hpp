#pragma once

#include "symcomp/error.hpp"
#include "symcomp/symbol.hpp"
#include "symcomp/term.hpp"
#include "symcomp/expr.hpp"
#include "symcomp/event.hpp"
#include "symcomp/lts.hpp"
#include "symcomp/compose.hpp"
#include "symcomp/concrete.hpp"
#include "symcomp/dy_attacker.hpp"
#include "symcomp/dy_library.hpp"
#include "symcomp/bir.hpp"
#include "symcomp/bir_concrete.hpp"
#include "symcomp/sbir.hpp"
#include "symcomp/sapic.hpp"
#include "symcomp/sapic_semantics.hpp"
#include "symcomp/combiners.hpp"
#include "symcomp/pipeline.hpp"
#include "symcomp/scenario.hpp"
#include "symcomp/checks.hpp"
#include "symcomp/demos.hpp"
#include "symcomp/suites.hpp"
