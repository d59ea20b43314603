#pragma once

#include <bvcf/compare.hpp>
#include <bvcf/config_io.hpp>
#include <bvcf/core_model.hpp>
#include <bvcf/cost_model.hpp>
#include <bvcf/error.hpp>
#include <bvcf/provisioning.hpp>
#include <bvcf/report_io.hpp>
#include <bvcf/scenario.hpp>
#include <bvcf/scheduler.hpp>
#include <bvcf/sim_engine.hpp>
#include <bvcf/transfer_protocol.hpp>
