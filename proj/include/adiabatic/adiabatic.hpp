#pragma once

#include "adiabatic/entanglement.hpp"
#include "adiabatic/error.hpp"
#include "adiabatic/evolution.hpp"
#include "adiabatic/grover.hpp"
#include "adiabatic/hamiltonian.hpp"
#include "adiabatic/linalg.hpp"
#include "adiabatic/schedule.hpp"
