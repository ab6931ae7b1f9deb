#include <cstdio>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "vitalink/orchestrator/store.hpp"

namespace vitalink::cli {

namespace {

struct UserOptions {
    std::string data_dir;
    std::string phone;
    std::string out;
    bool yes = false;
};

void require_dir(const std::string& dir) {
    if (!std::filesystem::is_directory(dir)) throw Failure("no data directory at " + dir);
}

void export_user(const UserOptions& o) {
    require_dir(o.data_dir);
    orchestrator::JsonlStore store(o.data_dir);
    if (!store.user(o.phone)) throw Failure("no user " + o.phone, 3);
    const auto text = store.export_user(o.phone).dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out, std::ios::trunc);
    out << text;
    if (!out) throw Failure("cannot write " + o.out);
    std::printf("wrote %s\n", o.out.c_str());
}

void delete_user(const UserOptions& o) {
    require_dir(o.data_dir);
    if (!o.yes) throw Failure("refusing to delete without --yes");
    orchestrator::JsonlStore store(o.data_dir);
    if (!store.delete_user(o.phone)) throw Failure("no user " + o.phone, 3);
    std::printf("deleted %s (audit log kept)\n", o.phone.c_str());
}

}  // namespace

void add_export_user(CLI::App& app) {
    auto o = std::make_shared<UserOptions>();
    auto* cmd = app.add_subcommand("export-user", "Print everything stored for one user as JSON");
    cmd->add_option("--data-dir", o->data_dir, "State directory of a stopped server")->required();
    cmd->add_option("--phone", o->phone, "User phone number")->required();
    cmd->add_option("--out", o->out, "Write to this file instead of stdout");
    cmd->callback([o] { export_user(*o); });
}

void add_delete_user(CLI::App& app) {
    auto o = std::make_shared<UserOptions>();
    auto* cmd = app.add_subcommand("delete-user", "Remove everything stored for one user except the audit log");
    cmd->add_option("--data-dir", o->data_dir, "State directory of a stopped server")->required();
    cmd->add_option("--phone", o->phone, "User phone number")->required();
    cmd->add_flag("--yes", o->yes, "Confirm the deletion");
    cmd->callback([o] { delete_user(*o); });
}

}  // namespace vitalink::cli
