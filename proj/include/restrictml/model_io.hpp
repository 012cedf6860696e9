#pragma once

#include <string>

#include "json.hpp"
#include "restrictml/cnn.hpp"
#include "restrictml/forest.hpp"
#include "restrictml/svm.hpp"

namespace restrictml {

// Model files are JSON documents with a "type" discriminator ("svm",
// "forest", "cnn") and an optional free-form "manifest" object recording
// how the model was produced.

nlohmann::json svm_model_to_json(const SvmModel& model);
SvmModel svm_model_from_json(const nlohmann::json& doc);

nlohmann::json forest_model_to_json(const ForestModel& model);
ForestModel forest_model_from_json(const nlohmann::json& doc);

nlohmann::json network_to_json(const NetworkState& state);
NetworkState network_from_json(const nlohmann::json& doc);

void save_model_file(const std::string& path, nlohmann::json model,
                     nlohmann::json manifest = nlohmann::json::object());
nlohmann::json load_model_file(const std::string& path);

std::string model_type(const nlohmann::json& doc);

}  // namespace restrictml
