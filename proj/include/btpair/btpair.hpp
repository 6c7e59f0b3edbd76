#pragma once

// Umbrella header.
#include "btpair/octets.hpp"
#include "btpair/mixhash.hpp"
#include "btpair/keys.hpp"
#include "btpair/dh.hpp"
#include "btpair/message.hpp"
#include "btpair/device.hpp"
#include "btpair/intruder.hpp"
#include "btpair/simnet.hpp"
#include "btpair/verdict.hpp"
#include "btpair/scenario.hpp"
