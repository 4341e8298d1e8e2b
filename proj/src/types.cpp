#include "rffhsi/types.hpp"

#include <algorithm>

namespace rffhsi {

LabelVector make_label_vector(std::vector<int> ids) {
    if (ids.empty()) throw_dimension("label vector is empty");
    int max_label = 0;
    for (int id : ids) {
        if (id < 1) throw_format("label ids must be >= 1, got " + std::to_string(id));
        max_label = std::max(max_label, id);
    }
    std::vector<char> seen(static_cast<std::size_t>(max_label) + 1, 0);
    for (int id : ids) seen[static_cast<std::size_t>(id)] = 1;
    for (int c = 1; c <= max_label; ++c)
        if (!seen[static_cast<std::size_t>(c)])
            throw_format("class " + std::to_string(c) + " has no samples");
    LabelVector out;
    out.ids = std::move(ids);
    out.num_classes = max_label;
    return out;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t offset) {
    std::uint64_t z = base + offset * 0x9e3779b97f4a7c15ull + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace rffhsi
