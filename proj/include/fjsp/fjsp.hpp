#ifndef FJSP_FJSP_HPP
#define FJSP_FJSP_HPP

#include "fjsp/decoder.hpp"
#include "fjsp/experiment.hpp"
#include "fjsp/genome.hpp"
#include "fjsp/initializer.hpp"
#include "fjsp/instance.hpp"
#include "fjsp/metrics.hpp"
#include "fjsp/moea.hpp"
#include "fjsp/random.hpp"
#include "fjsp/variation.hpp"

#endif
