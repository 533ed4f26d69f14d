/** Problem board projection: rows derive solely from the status document.
 *
 * Triage order: down/unreachable hosts first, then CRITICAL, UNKNOWN and
 * WARNING services; ties go to the longest-standing problem.
 */

import type { ObjectState, StatusDocument } from "./types.js";

export interface ProblemRow {
	host: string;
	service: string | null;
	status: string;
	stateType: string;
	attempt: number;
	maxAttempts: number;
	duration: number;
	acknowledged: boolean;
	inDowntime: boolean;
	lastOutput: string;
}

const SEVERITY_ORDER: Record<string, number> = {
	DOWN: 0,
	UNREACHABLE: 1,
	CRITICAL: 2,
	UNKNOWN: 3,
	WARNING: 4,
};

export function severityRank(status: string): number {
	return SEVERITY_ORDER[status] ?? 5;
}

export function buildBoard(doc: StatusDocument): ProblemRow[] {
	const rows = doc.objects.map(toRow);
	rows.sort((a, b) => {
		const severity = severityRank(a.status) - severityRank(b.status);
		if (severity !== 0) return severity;
		if (b.duration !== a.duration) return b.duration - a.duration;
		return rowKey(a) < rowKey(b) ? -1 : 1;
	});
	return rows;
}

export function rowKey(row: { host: string; service: string | null }): string {
	return row.service === null ? row.host : `${row.host}/${row.service}`;
}

function toRow(obj: ObjectState): ProblemRow {
	return {
		host: obj.host,
		service: obj.service,
		status: obj.status,
		stateType: obj.state_type,
		attempt: obj.attempt,
		maxAttempts: obj.max_attempts,
		duration: obj.duration,
		acknowledged: obj.acknowledged,
		inDowntime: obj.in_downtime,
		lastOutput: obj.last_output,
	};
}

export function formatDuration(seconds: number): string {
	const total = Math.max(0, Math.floor(seconds));
	const days = Math.floor(total / 86400);
	const hours = Math.floor((total % 86400) / 3600);
	const minutes = Math.floor((total % 3600) / 60);
	const secs = total % 60;
	if (days > 0) return `${days}d ${hours}h`;
	if (hours > 0) return `${hours}h ${minutes}m`;
	if (minutes > 0) return `${minutes}m ${secs}s`;
	return `${secs}s`;
}
