#pragma once

#include "spinladder/basis.hpp"
#include "spinladder/driver.hpp"
#include "spinladder/eigensolver.hpp"
#include "spinladder/errors.hpp"
#include "spinladder/hamiltonian.hpp"
#include "spinladder/linalg.hpp"
#include "spinladder/observables.hpp"
#include "spinladder/ordering.hpp"
#include "spinladder/reduction.hpp"
#include "spinladder/transform.hpp"
