#pragma once

// Umbrella header: the whole library.

#include "numeric.hpp"     // exact integers & rationals
#include "measure.hpp"     // discrete measures, convolution, pushforward
#include "admissible.hpp"  // (N, B, L) pairs, unitarity checks, rescaling
#include "sequence.hpp"    // symbol sequence models, metric, cylinders
#include "transform.hpp"   // truncation tower, masks, Fourier products, tails
#include "spectrum.hpp"    // tower spectra, orthogonality, Parseval Q
#include "criteria.hpp"    // convergence / spectrality side conditions
#include "sampling.hpp"    // Birkhoff frequencies, recurrence times
#include "dimension.hpp"   // dimension formula, inverse problem, IVP family
