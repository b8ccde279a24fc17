#pragma once

#include <string>
#include <vector>

#include "CLI11.hpp"

namespace fermigraph::cli {

/// Reads a JSON object whose keys are long option names. Nested objects
/// address subcommands. Values given on the command line win.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace fermigraph::cli
