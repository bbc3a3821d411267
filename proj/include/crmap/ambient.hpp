#ifndef CRMAP_AMBIENT_HPP
#define CRMAP_AMBIENT_HPP

#include <optional>
#include <string>
#include <vector>

namespace crmap
{

enum class ModelId { H5, X, T, S5, DIV4, SIEGEL, C3, C4, HYP1 };

struct AmbientInfo {
    ModelId id;
    std::string name;
    std::vector<std::string> coords;
    std::vector<int> weights;
    // Component labels of a map into this space, in coordinate order.
    std::vector<std::string> labels;
};

const AmbientInfo &ambient(ModelId);
std::optional<ModelId> parse_model_id(const std::string &);
const std::vector<ModelId> &all_model_ids();

} // namespace crmap

#endif
