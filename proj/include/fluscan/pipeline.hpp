#ifndef FLUSCAN_PIPELINE_HPP
#define FLUSCAN_PIPELINE_HPP

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fluscan::pipeline {

// Thrown by run_pipeline with the name of the stage that failed.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error("stage '" + stage + "': " + message),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Runs the configured stage sequence
//   [simulate ->] ingest -> select -> train -> estimate -> aggregate ->
//   fit -> plot
// reading static inputs relative to the config file and writing every
// artifact under out_dir. Fully deterministic given the config (all
// randomness flows from configured seeds).
void run_pipeline(const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir, bool verbose,
                  std::ostream& log);

}  // namespace fluscan::pipeline

#endif
