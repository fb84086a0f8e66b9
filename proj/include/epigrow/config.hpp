#pragma once

#include <iosfwd>
#include <string>

#include "epigrow/model.hpp"

namespace epigrow {

/**
 * Plain-text model configuration.
 *
 * Format: named sections with flat key=value lines. '#' starts a comment.
 *
 *   [params]
 *   b = 0.0482
 *   ...
 *   [beta]
 *   form = health_only
 *   beta0 = 0.023
 *   ...
 *
 * Sections: [params], [beta], [gamma], [knowledge], [production], [utility].
 * Unknown sections or keys raise ConfigError; every key is optional and
 * defaults to the corresponding field of a default-constructed Model.
 */
Model load_model(std::istream& in);
Model load_model_file(const std::string& path);
void save_model(const Model& model, std::ostream& out);
void save_model_file(const Model& model, const std::string& path);

}  // namespace epigrow
