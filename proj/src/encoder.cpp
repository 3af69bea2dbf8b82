#include "proteoknight/encoder.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "proteoknight/error.hpp"

namespace proteoknight {

namespace {

constexpr std::array<Rgb, 20> kStandardColors = {{
    {255, 0, 0},      // A
    {255, 255, 0},    // C
    {0, 234, 255},    // D
    {170, 0, 255},    // E
    {255, 127, 0},    // F
    {191, 255, 0},    // G
    {0, 149, 255},    // H
    {255, 0, 170},    // I
    {237, 185, 185},  // K
    {185, 215, 237},  // L
    {231, 233, 185},  // M
    {220, 185, 237},  // N
    {185, 237, 224},  // P
    {143, 35, 35},    // Q
    {35, 98, 143},    // R
    {143, 106, 35},   // S
    {107, 35, 143},   // T
    {115, 237, 155},  // V
    {204, 204, 204},  // W
    {0, 64, 255},     // Y
}};

void stamp_disk(Image& image, int cx, int cy, int radius, Rgb color) {
    const int r2 = radius * radius;
    for (int dy = -radius; dy <= radius; ++dy) {
        const int py = cy + dy;
        if (py < 0 || py >= image.height) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
            const int px = cx + dx;
            if (px < 0 || px >= image.width) continue;
            if (dx * dx + dy * dy <= r2) image.set(px, py, color);
        }
    }
}

std::string file_stem_for(std::string_view id) {
    std::string stem(id);
    for (char& c : stem)
        if (c == '/' || c == '\\' || c == ':') c = '_';
    return stem;
}

}  // namespace

AngleColorTable::AngleColorTable() : AngleColorTable(kStandardColors) {}

AngleColorTable::AngleColorTable(const std::array<Rgb, 20>& colors) : colors_(colors) {
    for (std::size_t i = 0; i < radians_.size(); ++i)
        radians_[i] = static_cast<double>(i) * 18.0 * std::numbers::pi / 180.0;
}

std::size_t AngleColorTable::checked_index(char residue) {
    const int idx = residue_index(residue);
    if (idx < 0) throw std::invalid_argument(std::string("unknown residue '") + residue + "'");
    return static_cast<std::size_t>(idx);
}

const AngleColorTable& standard_table() {
    static const AngleColorTable table;
    return table;
}

void EncodingConfig::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be > 0");
    if (point_size < 1) throw std::invalid_argument("point size must be >= 1");
    if (static_cast<double>(size) < 2.0 * radius + 2.0 * point_size)
        throw std::invalid_argument("image size must be >= 2*radius + 2*point_size");
}

Displacement displacement(char residue, const AngleColorTable& table, double radius) {
    const double theta = table.angle_radians(residue);
    return {radius * std::cos(theta), radius * std::sin(theta)};
}

std::vector<WalkStep> trace_walk(std::string_view residues, const EncodingConfig& cfg,
                                 const AngleColorTable& table) {
    cfg.validate();
    const double m = static_cast<double>(cfg.size);
    const double center = m / 2.0;

    // Displacements depend only on the angle, so compute each once.
    std::array<Displacement, 20> moves{};
    for (std::size_t i = 0; i < moves.size(); ++i) moves[i] = displacement(kResidues[i], table, cfg.radius);

    std::vector<WalkStep> steps;
    steps.reserve(residues.size());
    double x = center;
    double y = center;
    for (char residue : residues) {
        const int idx = residue_index(residue);
        if (idx < 0) throw std::invalid_argument(std::string("unknown residue '") + residue + "'");
        WalkStep step{};
        if (x < 0.0 || x > m) {
            x = center;
            step.reset_x = true;
        }
        if (y < 0.0 || y > m) {
            y = center;
            step.reset_y = true;
        }
        const Displacement d = moves[static_cast<std::size_t>(idx)];
        x += d.dx;
        y -= d.dy;
        step.x = x;
        step.y = y;
        step.cx = static_cast<int>(std::lround(x));
        step.cy = static_cast<int>(std::lround(y));
        step.stamped = step.cx >= 0 && step.cx < cfg.size && step.cy >= 0 && step.cy < cfg.size;
        steps.push_back(step);
    }
    return steps;
}

Image encode(std::string_view residues, const EncodingConfig& cfg, const AngleColorTable& table) {
    const auto steps = trace_walk(residues, cfg, table);
    Image image(cfg.size, cfg.size);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const WalkStep& s = steps[i];
        if (s.stamped) stamp_disk(image, s.cx, s.cy, cfg.point_size, table.color(residues[i]));
    }
    return image;
}

CorpusResult encode_corpus(const std::vector<ProteinSequence>& seqs, const LabelMap& labels,
                           const EncodingConfig& cfg, const std::filesystem::path& out_dir,
                           const CorpusOptions& options, const AngleColorTable& table) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw DataError("cannot create output directory '" + out_dir.string() + "'" +
                        (ec ? ": " + ec.message() : std::string()));

    struct Slot {
        std::string path;
        std::string error;
    };
    std::vector<Slot> slots(seqs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < seqs.size(); i = next.fetch_add(1)) {
            const auto path = out_dir / (file_stem_for(seqs[i].id) + ".png");
            try {
                write_png(encode(seqs[i], cfg, table), path);
                slots[i].path = path.string();
            } catch (const std::exception& e) {
                slots[i].error = seqs[i].id + ": " + e.what();
            }
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(seqs.size())));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    CorpusResult result;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (!slots[i].error.empty()) {
            if (options.strict) throw DataError(slots[i].error);
            result.failures.push_back(std::move(slots[i].error));
            continue;
        }
        const auto it = labels.find(seqs[i].id);
        result.index.push_back({seqs[i].id, std::move(slots[i].path),
                                it == labels.end() ? std::string(kUnknownLabel)
                                                   : std::string(label_name(it->second))});
    }
    return result;
}

}  // namespace proteoknight
