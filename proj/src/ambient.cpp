#include <crmap/ambient.hpp>
#include <crmap/error.hpp>

#include <array>

namespace crmap
{

namespace
{

const std::array<AmbientInfo, 9> &table()
{
    static const std::array<AmbientInfo, 9> t{{
        {ModelId::H5, "H5", {"z1", "z2", "w"}, {1, 1, 2}, {"f1", "f2", "g"}},
        {ModelId::X, "X", {"z1", "z2", "zeta", "w"}, {1, 1, 2, 2}, {"f1", "f2", "phi", "g"}},
        {ModelId::T, "T", {"z1", "z2", "z3", "w"}, {1, 1, 1, 1}, {"f1", "f2", "f3", "g"}},
        {ModelId::S5, "S5", {"z1", "z2", "w"}, {1, 1, 1}, {"f1", "f2", "g"}},
        {ModelId::DIV4, "DIV4", {"z1", "z2", "z3", "z4"}, {1, 1, 1, 1}, {"f1", "f2", "f3", "f4"}},
        {ModelId::SIEGEL, "SIEGEL", {"z1", "z2", "w"}, {1, 1, 2}, {"f1", "f2", "g"}},
        {ModelId::C3, "C3", {"z1", "z2", "w"}, {1, 1, 2}, {"f1", "f2", "g"}},
        {ModelId::C4, "C4", {"z1", "z2", "z3", "z4"}, {1, 1, 1, 1}, {"f1", "f2", "f3", "f4"}},
        {ModelId::HYP1, "HYP1", {"y1", "y2", "y3", "y4", "y5"}, {1, 1, 1, 1, 2}, {"f1", "f2", "f3", "f4", "g"}},
    }};
    return t;
}

} // namespace

const AmbientInfo &ambient(ModelId id)
{
    for (const auto &a : table()) {
        if (a.id == id) {
            return a;
        }
    }
    throw model_error("unknown model id");
}

std::optional<ModelId> parse_model_id(const std::string &s)
{
    for (const auto &a : table()) {
        if (a.name == s) {
            return a.id;
        }
    }
    return std::nullopt;
}

const std::vector<ModelId> &all_model_ids()
{
    static const std::vector<ModelId> ids{ModelId::H5,     ModelId::X,  ModelId::T,  ModelId::S5,  ModelId::DIV4,
                                          ModelId::SIEGEL, ModelId::C3, ModelId::C4, ModelId::HYP1};
    return ids;
}

} // namespace crmap
