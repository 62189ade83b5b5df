#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hhq::cli {

enum class Command { integrate, verify, sharpness, maps, oracle };
enum class ShapeRequest { convex, concave, automatic };
enum class Suite { hh, ostrowski, maps, all };
enum class OutputFormat { json, csv };

inline constexpr std::uint64_t kDefaultSeed = 17;
inline constexpr const char* kVersion = "1.0.0";

struct CommandRequest {
    Command command;
    std::string function_text;
    double a = 0.0;
    double b = 1.0;
    std::optional<std::size_t> n;
    std::optional<double> tol;
    std::optional<std::size_t> n_max;
    ShapeRequest shape = ShapeRequest::automatic;
    std::optional<Suite> suite;
    std::size_t trials = 100;
    std::uint64_t seed = kDefaultSeed;
    std::size_t t_steps = 100;
    std::size_t panels = std::size_t{1} << 16;
    OutputFormat output = OutputFormat::json;
    bool f_map_halved = true;
    bool weighted_unscaled = false;
};

// Exit status contract:
//   0 success, 1 some inequality verdict failed, 2 parse/usage error,
//   3 shape or evaluation error.
struct RunOutcome {
    int exit_code;
    std::string body; // rendered JSON or CSV, newline terminated
};

RunOutcome run(const CommandRequest& request);

// HH_SEED, when set and the request does not carry an explicit seed,
// replaces the default. Throws std::invalid_argument on a malformed value.
std::uint64_t seed_from_env_or_default();

const char* suite_name(Suite s) noexcept;
const char* shape_name(ShapeRequest s) noexcept;

} // namespace hhq::cli
