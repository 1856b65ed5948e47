#ifndef WALLS_RENDER_HPP
#define WALLS_RENDER_HPP

#include <string>

#include "walls/broken.hpp"
#include "walls/tropical.hpp"

namespace walls {

struct RenderOptions {
    double scale = 24;     // pixels per lattice unit
    double viewport = 12;  // half-width of the visible window in lattice units
};

// Deterministic SVG for a serialised diagram or a broken-line dump; the
// artifact kind is detected from the first line.
std::string render_svg(const std::string& artifact_text, const RenderOptions& opts = {});

// dump with a stop header plus one line per broken line; source -1 takes
// every divisor ray
std::string broken_line_dump(const ScatteringDiagram& diagram, const ToricModel& model,
                             const RatPoint& stop, int source = -1);

// vertex and edge listing of a tropical disc, renderable like the other
// artifacts
std::string tropical_disc_dump(const TropicalDisc& disc);

}  // namespace walls

#endif
