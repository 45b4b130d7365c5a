#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "semaug/codec.hpp"
#include "semaug/ddim.hpp"
#include "semaug/embedding.hpp"
#include "semaug/filter.hpp"
#include "semaug/tensor.hpp"

namespace semaug {

/// Uniform provider configuration. Supported kinds per role:
///   embedder:       stub | file | remote
///   image_embedder: stub | remote
///   denoiser:       stub (constant | zero | affine | conditioned) | remote
///   codec:          identity | remote
///   classifier:     stub | file | remote
struct BackendOptions {
    std::string kind = "stub";
    std::string url;            // remote
    int timeout_ms = 30000;     // remote
    std::string path;           // file-backed
    std::string stub = "conditioned";  // denoiser stub variant
    double value = 0.0;         // constant stub value
    int dimension = 16;         // stub embedder dimension
};

/// Whole-image embedding for the diversity report.
class ImageEmbedder {
public:
    virtual ~ImageEmbedder() = default;
    virtual std::vector<double> embed(const Image& image) = 0;
};

/// 4x4 block means per channel; cheap, deterministic, model-free.
class BlockMeanImageEmbedder : public ImageEmbedder {
public:
    std::vector<double> embed(const Image& image) override;
};

/// Ranks the configured vocabulary by a hash of (patch bytes, label).
/// Pure function of the patch, so runs are reproducible at any concurrency.
class HashClassifier : public Classifier {
public:
    explicit HashClassifier(std::vector<std::string> labels);
    std::vector<Prediction> classify(const Image& patch) override;

private:
    std::vector<std::string> labels_;
};

/// Returns the same fixed ranking for every patch; backed by a JSON file
/// [[label, score], ...]. Handy as a table-driven fixture.
class FixedClassifier : public Classifier {
public:
    explicit FixedClassifier(std::vector<Prediction> predictions);
    static FixedClassifier from_file(const std::string& path);
    std::vector<Prediction> classify(const Image& patch) override;

private:
    std::vector<Prediction> predictions_;
};

// ---------------------------------------------------------------------------
// Remote clients. One HTTP POST per call, JSON bodies, tensors per wire.hpp.
// Each client serializes its own requests; share one instance freely across
// workers.
// ---------------------------------------------------------------------------

class RemoteClient {
public:
    RemoteClient(std::string url, int timeout_ms);
    ~RemoteClient();

    /// POSTs a JSON body, returns the response body. Throws BackendError on
    /// transport failures and non-2xx statuses.
    std::string post_json(const std::string& route, const std::string& body);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::mutex mutex_;
};

class RemoteEmbedder : public EmbeddingProvider {
public:
    RemoteEmbedder(const std::string& url, int timeout_ms);
    std::vector<std::vector<double>> embed(const std::vector<std::string>& names) override;

private:
    RemoteClient client_;
};

class RemoteImageEmbedder : public ImageEmbedder {
public:
    RemoteImageEmbedder(const std::string& url, int timeout_ms);
    std::vector<double> embed(const Image& image) override;

private:
    RemoteClient client_;
};

class RemoteDenoiser : public Denoiser {
public:
    RemoteDenoiser(const std::string& url, int timeout_ms);
    Latent predict_noise(const Latent& z, int timestep, const std::string& condition) override;

private:
    RemoteClient client_;
};

class RemoteCodec : public ImageCodec {
public:
    RemoteCodec(const std::string& url, int timeout_ms);
    EncodedLatent encode(const Image& image) override;
    Image decode(const Latent& latent) override;

private:
    RemoteClient client_;
};

class RemoteClassifier : public Classifier {
public:
    RemoteClassifier(const std::string& url, int timeout_ms);
    std::vector<Prediction> classify(const Image& patch) override;

private:
    RemoteClient client_;
};

// Factories over BackendOptions; throw ConfigError on unsupported kinds.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const BackendOptions& options);
std::unique_ptr<ImageEmbedder> make_image_embedder(const BackendOptions& options);
std::unique_ptr<Denoiser> make_denoiser(const BackendOptions& options);
std::unique_ptr<ImageCodec> make_codec(const BackendOptions& options);
std::unique_ptr<Classifier> make_classifier(const BackendOptions& options,
                                            const std::vector<std::string>& vocabulary);

}  // namespace semaug
