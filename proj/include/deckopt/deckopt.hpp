#pragma once

#include "deckopt/bench.hpp"
#include "deckopt/brute.hpp"
#include "deckopt/cards.hpp"
#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/evaluate.hpp"
#include "deckopt/ga.hpp"
#include "deckopt/game.hpp"
#include "deckopt/instances.hpp"
#include "deckopt/json_util.hpp"
#include "deckopt/mc.hpp"
#include "deckopt/mdp.hpp"
#include "deckopt/mlp.hpp"
#include "deckopt/predictor.hpp"
#include "deckopt/qlearn.hpp"
#include "deckopt/replay.hpp"
#include "deckopt/rng.hpp"
#include "deckopt/stats.hpp"
#include "deckopt/timing.hpp"
