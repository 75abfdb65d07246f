#pragma once

#include <map>
#include <string>

#include "diaster/env/env.hpp"

namespace diaster::env {

/// Loads an environment from its declarative spec file (key-value schema
/// "env.v1", documented in docs/FORMATS.md). Custom MDPs carry full
/// transition and hidden-reward tables.
EnvInstance load_env_spec(const std::string& path);

/// Builds an environment from already-parsed key/value pairs. Exposed for
/// the experiment config loader, which accepts inline env.* keys.
EnvInstance make_env(const std::map<std::string, std::string>& kv);

}  // namespace diaster::env
