#pragma once

#include "ropera/decoder.hpp"
#include "ropera/error.hpp"
#include "ropera/kinesim.hpp"
#include "ropera/lightpaint.hpp"
#include "ropera/notation.hpp"
#include "ropera/player.hpp"
#include "ropera/protocol.hpp"
#include "ropera/trajectory.hpp"
#include "ropera/types.hpp"
#include "ropera/vocabulary.hpp"
