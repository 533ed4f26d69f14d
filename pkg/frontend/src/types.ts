/** Wire types of the engine's status API. */

export interface ObjectState {
	host: string;
	service: string | null;
	status: string;
	state_type: string;
	attempt: number;
	max_attempts: number;
	last_check: number;
	last_state_change: number;
	last_hard_change: number;
	last_output: string;
	acknowledged: boolean;
	in_downtime: boolean;
	duration: number;
}

export interface HostCounts {
	total: number;
	up: number;
	down: number;
	unreachable: number;
}

export interface ServiceCounts {
	total: number;
	ok: number;
	warning: number;
	critical: number;
	unknown: number;
}

export interface StatusDocument {
	generated_at: number;
	counts: { hosts: HostCounts; services: ServiceCounts };
	objects: ObjectState[];
	stats: Record<string, number>;
}

export interface ApiErrorBody {
	error: string;
}
