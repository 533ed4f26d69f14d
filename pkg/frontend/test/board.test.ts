import assert from "node:assert/strict";
import { test } from "node:test";

import { buildBoard, formatDuration, rowKey, severityRank } from "../src/board.js";
import type { ObjectState, StatusDocument } from "../src/types.js";

function obj(partial: Partial<ObjectState>): ObjectState {
	return {
		host: "h",
		service: null,
		status: "DOWN",
		state_type: "HARD",
		attempt: 1,
		max_attempts: 3,
		last_check: 0,
		last_state_change: 0,
		last_hard_change: 0,
		last_output: "",
		acknowledged: false,
		in_downtime: false,
		duration: 0,
		...partial,
	};
}

function doc(objects: ObjectState[]): StatusDocument {
	return {
		generated_at: 0,
		counts: {
			hosts: { total: 0, up: 0, down: 0, unreachable: 0 },
			services: { total: 0, ok: 0, warning: 0, critical: 0, unknown: 0 },
		},
		objects,
		stats: {},
	};
}

test("severity order puts dead hosts before sick services", () => {
	assert.ok(severityRank("DOWN") < severityRank("UNREACHABLE"));
	assert.ok(severityRank("UNREACHABLE") < severityRank("CRITICAL"));
	assert.ok(severityRank("CRITICAL") < severityRank("UNKNOWN"));
	assert.ok(severityRank("UNKNOWN") < severityRank("WARNING"));
});

test("board sorts by severity then longest duration", () => {
	const board = buildBoard(
		doc([
			obj({ host: "w1", service: "http", status: "WARNING", duration: 900 }),
			obj({ host: "c1", service: "disk", status: "CRITICAL", duration: 60 }),
			obj({ host: "gw", status: "DOWN", duration: 30 }),
			obj({ host: "c2", service: "load", status: "CRITICAL", duration: 600 }),
		]),
	);
	assert.deepEqual(
		board.map(rowKey),
		["gw", "c2/load", "c1/disk", "w1/http"],
	);
});

test("rows carry badges and output verbatim", () => {
	const board = buildBoard(
		doc([
			obj({
				host: "web1",
				service: "http",
				status: "CRITICAL",
				acknowledged: true,
				in_downtime: true,
				last_output: "Connection refused by host",
				attempt: 2,
				max_attempts: 3,
			}),
		]),
	);
	assert.equal(board.length, 1);
	const row = board[0];
	assert.equal(row.acknowledged, true);
	assert.equal(row.inDowntime, true);
	assert.equal(row.lastOutput, "Connection refused by host");
	assert.equal(row.attempt, 2);
	assert.equal(row.maxAttempts, 3);
});

test("empty document gives an empty board", () => {
	assert.deepEqual(buildBoard(doc([])), []);
});

test("duration formatting", () => {
	assert.equal(formatDuration(42), "42s");
	assert.equal(formatDuration(90), "1m 30s");
	assert.equal(formatDuration(3700), "1h 1m");
	assert.equal(formatDuration(200000), "2d 7h");
	assert.equal(formatDuration(-5), "0s");
});
