#pragma once

#include "puzzleboard/image.hpp"
#include "puzzleboard/pipeline.hpp"

namespace pbcli {

/// Input dimmed to mid-grey with the lattice links of every component drawn
/// on top (white when decoded, black otherwise) and a cross on each
/// detected corner (black on decoded components, white elsewhere).
puzzleboard::GrayImage debug_overlay(const puzzleboard::GrayImage& img, const puzzleboard::DetectionResult& result);

}  // namespace pbcli
