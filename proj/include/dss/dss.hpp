// dss.hpp — umbrella header for the discrete symplectic spectral toolkit.

#pragma once

#include "dss/core.hpp"
#include "dss/propagation.hpp"
#include "dss/spectrum.hpp"
#include "dss/eigenbasis.hpp"
#include "dss/weyl.hpp"
#include "dss/bvp.hpp"
#include "dss/spectral_measure.hpp"
#include "dss/examples.hpp"
#include "dss/io.hpp"
