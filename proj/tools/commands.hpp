#pragma once

#include "config.hpp"

namespace ringscan::cli {

void cmd_scene(const RunConfig& cfg);
void cmd_measure(const RunConfig& cfg);
void cmd_dataset(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_eval(const RunConfig& cfg);
void cmd_reconstruct(const RunConfig& cfg);
void cmd_ssim(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg);

}  // namespace ringscan::cli
