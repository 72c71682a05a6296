#pragma once

// Built-in copies of the CSV tables under data/.
namespace tpv::tables {
const char* si_nk();
const char* au_nk();
const char* si_cp();
}
