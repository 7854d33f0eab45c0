#ifndef DISCHULL_SVG_HPP
#define DISCHULL_SVG_HPP

#include <string>

#include "dischull/fatten.hpp"

namespace dischull {

// Embedded tree with its pellicle walk traced slightly off the edges.
std::string svg_tree(const PlanarTree& tree, const PellicleWalk* walk = nullptr);

// Generalized disc in the parameter plane: unit circle, attached trees,
// pellicle walk polyline.
std::string svg_neuron(const Neuron& n);

// Fattened region boundary with its capsule skeleton.
std::string svg_region(const FattenedRegion& r);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dischull

#endif
