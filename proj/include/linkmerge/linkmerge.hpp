// Umbrella header for the linkmerge library.

#ifndef LINKMERGE_LINKMERGE_HPP
#define LINKMERGE_LINKMERGE_HPP

#include "linkmerge/deconvolution.hpp"
#include "linkmerge/io.hpp"
#include "linkmerge/linkfit.hpp"
#include "linkmerge/matching.hpp"
#include "linkmerge/noise.hpp"
#include "linkmerge/rng.hpp"
#include "linkmerge/separable.hpp"
#include "linkmerge/simlab.hpp"
#include "linkmerge/step_cdf.hpp"

#endif // LINKMERGE_LINKMERGE_HPP
