#pragma once

#include "tpv/config.hpp"

#include <string>
#include <vector>

namespace tpv::cli {

struct Preset {
    std::string name;
    std::string description;
    json config;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

}
