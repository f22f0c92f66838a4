#pragma once

// Umbrella header for the library (the CLI layer is in gupw/cli.hpp).

#include "gupw/errors.hpp"
#include "gupw/fock_space.hpp"
#include "gupw/gup.hpp"
#include "gupw/json_io.hpp"
#include "gupw/moments.hpp"
#include "gupw/operator.hpp"
#include "gupw/oracle.hpp"
#include "gupw/quantum_state.hpp"
#include "gupw/rng.hpp"
#include "gupw/state_spec.hpp"
#include "gupw/states.hpp"
#include "gupw/witnesses.hpp"
