#include "qslide/cube.hpp"

namespace qslide {

std::string vertex_name(Vertex v) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; v; ++i, v >>= 1) {
        if (v & 1) {
            if (!first) out += ',';
            out += std::to_string(i + 1);
            first = false;
        }
    }
    out += '}';
    return out;
}

}  // namespace qslide
