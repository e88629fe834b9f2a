#pragma once

#include "semilab/errors.hpp"
#include "semilab/fock.hpp"
#include "semilab/spacetime.hpp"
#include "semilab/modes.hpp"
#include "semilab/bogolubov.hpp"
#include "semilab/stress_energy.hpp"
#include "semilab/consistency.hpp"
#include "semilab/measurement.hpp"
#include "semilab/report.hpp"
#include "semilab/scenario.hpp"
