#ifndef WNN_WNN_HPP
#define WNN_WNN_HPP

/**
 * @file wnn.hpp
 *
 * @brief Umbrella header for weighted nearest-neighbor condensing.
 */

#include "error.hpp"
#include "metric.hpp"
#include "dataset.hpp"
#include "classifier.hpp"
#include "condense.hpp"
#include "exact.hpp"
#include "compression.hpp"
#include "navnet.hpp"
#include "harness.hpp"

#endif
