#pragma once
#include <stdexcept>
#include <string>

namespace deckopt {

/// Bad argument or precondition violation. Maps to CLI exit code 2.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Action not legal in the given state.
struct InvalidAction : std::logic_error {
    using std::logic_error::logic_error;
};

/// Operation asked of a state that cannot serve it (e.g. move requested
/// in a finished game).
struct InvalidState : std::logic_error {
    using std::logic_error::logic_error;
};

/// Search state already at the episode horizon (t == D).
struct HorizonExhausted : std::logic_error {
    using std::logic_error::logic_error;
};

/// Replay buffer holds fewer transitions than the requested batch.
struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters went non-finite during learning. Maps to CLI exit code 3.
struct TrainingDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Enumeration would exceed the brute-force limit. Maps to CLI exit code 4.
struct InstanceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Instance-chain generation could not continue (e.g. no candidates).
struct GenerationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Missing or inconsistent experiment configuration.
struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace deckopt
