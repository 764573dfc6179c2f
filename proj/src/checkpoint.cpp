#include "flowcast/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "flowcast/errors.hpp"
#include "flowcast/io.hpp"

namespace flowcast {

namespace {

constexpr char kMagic[8] = {'F', 'L', 'W', 'C', 'K', 'P', 'T', '1'};

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
    uint64_t bits;
    std::memcpy(&bits, &d, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
    const std::string& buf;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > buf.size()) throw DataError("checkpoint truncated");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    double f64() {
        need(8);
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    }
    std::string bytes(size_t n) {
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
};

json config_to_meta(const PredictorConfig& cfg) {
    json meta;
    meta["arch"] = arch_to_string(cfg.arch);
    meta["layers"] = cfg.layers;
    meta["hidden"] = cfg.hidden;
    meta["embed_dim"] = cfg.embed_dim;
    meta["epochs"] = cfg.epochs;
    meta["batch"] = cfg.batch;
    meta["threshold"] = cfg.threshold;
    meta["lr"] = cfg.lr;
    meta["weight_decay"] = cfg.weight_decay;
    meta["decoupled_decay"] = cfg.decoupled_decay;
    meta["bidirectional"] = cfg.bidirectional;
    meta["seed"] = cfg.seed;
    return meta;
}

PredictorConfig config_from_meta(const json& meta) {
    PredictorConfig cfg;
    try {
        cfg.arch = arch_from_string(meta.at("arch").get<std::string>());
        cfg.layers = meta.at("layers").get<int>();
        cfg.hidden = meta.at("hidden").get<int>();
        cfg.embed_dim = meta.at("embed_dim").get<int>();
        cfg.epochs = meta.at("epochs").get<int>();
        cfg.batch = meta.at("batch").get<int>();
        cfg.threshold = meta.at("threshold").get<double>();
        cfg.lr = meta.at("lr").get<double>();
        cfg.weight_decay = meta.at("weight_decay").get<double>();
        cfg.decoupled_decay = meta.at("decoupled_decay").get<bool>();
        cfg.bidirectional = meta.at("bidirectional").get<bool>();
        cfg.seed = meta.at("seed").get<uint64_t>();
    } catch (const json::exception& e) {
        throw DataError(std::string("checkpoint meta: ") + e.what());
    }
    return cfg;
}

} // namespace

void save_checkpoint(const std::string& path, PredictorModel& model) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));

    std::string meta = config_to_meta(model.config()).dump();
    put_u32(out, static_cast<uint32_t>(meta.size()));
    out += meta;

    auto ps = model.params();
    put_u32(out, static_cast<uint32_t>(ps.size()));
    for (const auto& p : ps) {
        put_u32(out, static_cast<uint32_t>(p.name.size()));
        out += p.name;
        put_u32(out, static_cast<uint32_t>(p.rows));
        put_u32(out, static_cast<uint32_t>(p.cols));
        for (double v : *p.value) put_f64(out, v);
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open checkpoint for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("short write to checkpoint: " + path);
}

PredictorModel load_checkpoint(const std::string& path) {
    std::string buf = read_file(path);
    Reader r{buf};
    if (r.bytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic)))
        throw DataError("not a model checkpoint: " + path);

    uint32_t meta_len = r.u32();
    json meta = json::parse(r.bytes(meta_len), nullptr, false);
    if (meta.is_discarded()) throw DataError("checkpoint meta is not valid JSON");
    PredictorModel model(config_from_meta(meta));

    auto ps = model.params();
    uint32_t count = r.u32();
    if (count != ps.size())
        throw DataError("checkpoint tensor count " + std::to_string(count) +
                        " != expected " + std::to_string(ps.size()));
    for (uint32_t i = 0; i < count; ++i) {
        uint32_t name_len = r.u32();
        std::string name = r.bytes(name_len);
        if (name != ps[i].name)
            throw DataError("checkpoint tensor '" + name + "' does not match expected '" +
                            ps[i].name + "'");
        uint32_t rows = r.u32();
        uint32_t cols = r.u32();
        uint64_t n = static_cast<uint64_t>(rows) * cols;
        if (rows != static_cast<uint32_t>(ps[i].rows) ||
            cols != static_cast<uint32_t>(ps[i].cols))
            throw DataError("tensor '" + name + "' is " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", expected " +
                            std::to_string(ps[i].rows) + "x" + std::to_string(ps[i].cols));
        for (uint64_t k = 0; k < n; ++k) (*ps[i].value)[k] = r.f64();
    }
    if (r.pos != buf.size()) throw DataError("trailing bytes after checkpoint payload");
    if (!model.parameters_finite()) throw NumericError("checkpoint holds non-finite values");
    return model;
}

} // namespace flowcast
