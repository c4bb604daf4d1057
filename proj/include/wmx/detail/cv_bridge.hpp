#pragma once

#include <opencv2/core.hpp>

#include "wmx/image.hpp"

namespace wmx::detail {

// CV_64FC(channels) copy of the samples, channel order preserved (RGB).
cv::Mat to_mat(const Image& img);

// Copies a CV_64F or CV_32F matrix back, clamping into range.
Image from_mat(const cv::Mat& m, PixelRange range);

}  // namespace wmx::detail
