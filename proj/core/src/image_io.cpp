#include "semaug/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "semaug/errors.hpp"

namespace semaug {

Image read_image(const std::filesystem::path& path) {
    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) {
        throw IoError("cannot read image: " + path.string());
    }
    Image out(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            out.at(y, x, 0) = row[x][2];
            out.at(y, x, 1) = row[x][1];
            out.at(y, x, 2) = row[x][0];
        }
    }
    return out;
}

void write_png(const std::filesystem::path& path, const Image& image) {
    if (image.empty()) {
        throw ValidationError("write_png: empty image: " + path.string());
    }
    cv::Mat bgr(image.height, image.width, CV_8UC3);
    for (int y = 0; y < image.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < image.width; ++x) {
            row[x][2] = image.at(y, x, 0);
            row[x][1] = image.at(y, x, 1);
            row[x][0] = image.at(y, x, 2);
        }
    }
    if (!cv::imwrite(path.string(), bgr)) {
        throw IoError("cannot write image: " + path.string());
    }
}

}  // namespace semaug
