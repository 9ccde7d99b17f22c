#pragma once

#include "params.hpp"
#include "basis.hpp"
#include "operator.hpp"
#include "hamiltonian.hpp"
#include "lapack.hpp"
#include "spectral.hpp"
#include "observables.hpp"
#include "topology.hpp"
#include "meanfield.hpp"
#include "dynamics.hpp"
#include "table.hpp"
#include "sweep.hpp"
