#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "glyphlab/io.hpp"
#include "glyphlab/pipeline.hpp"

extern char** environ;

namespace glyphlab {

namespace {

class TempDir {
public:
    TempDir()
    {
        std::string tmpl = (std::filesystem::temp_directory_path() / "glyphlab-XXXXXX").string();
        if (mkdtemp(tmpl.data()) == nullptr) {
            throw BackendError(std::string("cannot create a temporary directory: ") + std::strerror(errno));
        }
        path_ = tmpl;
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void run_checked(const std::vector<std::string>& argv)
{
    const int status = run_process(argv);
    if (status != 0) {
        throw BackendError(argv.front() + " exited with status " + std::to_string(status));
    }
}

} // namespace

int run_process(const std::vector<std::string>& argv)
{
    if (argv.empty()) {
        throw std::invalid_argument("empty command line");
    }
    std::vector<char*> args;
    for (const auto& a : argv) {
        args.push_back(const_cast<char*>(a.c_str()));
    }
    args.push_back(nullptr);
    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, args[0], nullptr, nullptr, args.data(), environ);
    if (rc != 0) {
        throw BackendError("cannot start " + argv.front() + ": " + std::strerror(rc));
    }
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) {
            throw BackendError("waitpid failed for " + argv.front());
        }
    }
    if (WIFEXITED(status)) {
        return WEXITSTATUS(status);
    }
    return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

ExecGenerator::ExecGenerator(std::filesystem::path program) : program_(std::move(program)) {}

GeneratedImage ExecGenerator::generate(const GenerateRequest& request)
{
    TempDir dir;
    const auto prompt = dir / "prompt.txt";
    const auto glyph = dir / "glyph.pgm";
    const auto prior = dir / "prior.pgm";
    const auto mask = dir / "mask.pgm";
    const auto out = dir / "out.pgm";
    const auto manifest = dir / "out.manifest.json";

    io::write_text_atomic(prompt, request.prompt);
    write_pgm(glyph, request.glyph.image);
    if (request.prior != nullptr) {
        write_pgm(prior, request.prior->image);
    }
    const int w = request.layout.canvas_width;
    const int h = request.layout.canvas_height;
    Image mask_image(w, h, 0);
    if (request.mask.empty()) {
        mask_image.pixels.assign(mask_image.pixels.size(), 255);
    } else {
        mask_image.pixels = box_mask(w, h, request.mask);
    }
    write_pgm(mask, mask_image);

    run_checked({program_.string(), prompt.string(), glyph.string(),
                 request.prior != nullptr ? prior.string() : std::string("-"), mask.string(), out.string(),
                 manifest.string()});

    GeneratedImage result;
    try {
        result.image = read_pgm(out);
    } catch (const std::exception& e) {
        throw BackendError(program_.string() + " produced no readable image: " + e.what());
    }
    if (result.image.width != w || result.image.height != h) {
        throw BackendError(program_.string() + " returned a " + std::to_string(result.image.width) + "x" +
                           std::to_string(result.image.height) + " image for a " + std::to_string(w) + "x" +
                           std::to_string(h) + " canvas");
    }
    if (std::filesystem::exists(manifest)) {
        result.manifest = io::manifest_from_json(io::json::parse(io::read_text(manifest)));
    }
    return result;
}

ExecOcr::ExecOcr(std::filesystem::path program) : program_(std::move(program)) {}

OcrResult ExecOcr::recognize(const GeneratedImage& image)
{
    TempDir dir;
    const auto in = dir / "image.pgm";
    const auto out = dir / "out.jsonl";
    write_pgm(in, image.image);
    run_checked({program_.string(), in.string(), out.string()});
    if (!std::filesystem::exists(out)) {
        throw BackendError(program_.string() + " wrote no OCR result");
    }
    OcrResult result;
    try {
        result = io::ocr_from_jsonl(io::read_text(out), out.string());
    } catch (const std::exception& e) {
        throw BackendError(e.what());
    }
    for (const auto& d : result.detections) {
        if (!d.box.valid() || !image.image.bounds().contains(d.box)) {
            throw BackendError(program_.string() + " reported a box outside the image for \"" + d.word + "\"");
        }
    }
    return result;
}

} // namespace glyphlab
