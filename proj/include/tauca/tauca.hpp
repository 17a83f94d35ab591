#pragma once

#include "tauca/analysis.hpp"
#include "tauca/ca_solver.hpp"
#include "tauca/csv.hpp"
#include "tauca/error.hpp"
#include "tauca/oracle.hpp"
#include "tauca/poly_system.hpp"
#include "tauca/tau_arith.hpp"
#include "tauca/tau_machine.hpp"
