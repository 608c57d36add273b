#pragma once

#include "feos/config.hpp"
#include "feos/diagnostics.hpp"
#include "feos/error.hpp"
#include "feos/fft.hpp"
#include "feos/grid.hpp"
#include "feos/harness.hpp"
#include "feos/initial.hpp"
#include "feos/output.hpp"
#include "feos/parallel.hpp"
#include "feos/run.hpp"
#include "feos/snapshot.hpp"
#include "feos/spectral.hpp"
#include "feos/splitting.hpp"
#include "feos/stencil.hpp"
#include "feos/text.hpp"
