/** Thin client over the engine's control API.
 *
 * Every mutating call maps to exactly one POST; 4xx responses surface the
 * server's machine-readable error text so the UI can show it inline.
 */

import type { StatusDocument } from "./types.js";

export class ApiError extends Error {
	constructor(
		public status: number,
		message: string,
	) {
		super(message);
	}
}

export class ApiClient {
	constructor(
		private base: string,
		private token: string | null = null,
		private fetchImpl: typeof fetch = fetch,
	) {}

	private headers(json: boolean): Record<string, string> {
		const headers: Record<string, string> = {};
		if (json) headers["Content-Type"] = "application/json";
		if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
		return headers;
	}

	private async handle<T>(res: Response): Promise<T> {
		if (res.ok) {
			return (await res.json()) as T;
		}
		let message = `HTTP ${res.status}`;
		try {
			const body = (await res.json()) as { error?: string };
			if (body.error) message = body.error;
		} catch {
			// non-JSON error body: keep the status text
		}
		throw new ApiError(res.status, message);
	}

	async problemStatus(): Promise<StatusDocument> {
		const res = await this.fetchImpl(
			`${this.base}/api/v1/status?problem_only=true`,
			{ headers: this.headers(false) },
		);
		return this.handle<StatusDocument>(res);
	}

	private async post(path: string, body: unknown): Promise<void> {
		const res = await this.fetchImpl(`${this.base}/api/v1/${path}`, {
			method: "POST",
			headers: this.headers(true),
			body: JSON.stringify(body),
		});
		await this.handle<unknown>(res);
	}

	async ack(host: string, service: string | null, who: string, comment: string): Promise<void> {
		await this.post("ack", { host, service, who, comment });
	}

	async downtime(host: string, service: string | null, start: number, end: number): Promise<void> {
		await this.post("downtime", { host, service, start, end });
	}

	async forceCheck(host: string, service: string | null): Promise<void> {
		await this.post("check", { host, service });
	}
}
