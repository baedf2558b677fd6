#pragma once

// Umbrella header for the cm-adelic library.

#include "cmadelic/adelic.hpp"
#include "cmadelic/bigint.hpp"
#include "cmadelic/cartan.hpp"
#include "cmadelic/cmdata.hpp"
#include "cmadelic/curves.hpp"
#include "cmadelic/errors.hpp"
#include "cmadelic/mat2.hpp"
#include "cmadelic/modarith.hpp"
#include "cmadelic/subgroup.hpp"
#include "cmadelic/verify.hpp"
