#include <fstream>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto res = loopalg::cli::run_command(args);
    if (!res.error.empty()) std::cerr << res.error;
    if (res.output.empty()) return res.exit_code;
    std::string path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--output") path = args[i + 1];
    for (const auto& a : args)
        if (a.rfind("--output=", 0) == 0) path = a.substr(9);
    if (path.empty()) {
        std::cout << res.output;
        return res.exit_code;
    }
    std::ofstream out(path, std::ios::binary);
    out << res.output;
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return loopalg::cli::file_error;
    }
    return res.exit_code;
}
