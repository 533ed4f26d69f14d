/** Console configuration: API base URL and optional bearer token.
 *
 * Defaults to same-origin; a ./config.json next to the built assets can
 * override both at runtime, so one build serves every deployment.
 */

export interface ConsoleConfig {
	apiBase: string;
	token: string | null;
	pollIntervalMs: number;
}

export const DEFAULT_CONFIG: ConsoleConfig = {
	apiBase: "",
	token: null,
	pollIntervalMs: 5000,
};

export async function loadConfig(
	fetchImpl: typeof fetch = fetch,
): Promise<ConsoleConfig> {
	try {
		const res = await fetchImpl("./config.json");
		if (!res.ok) return { ...DEFAULT_CONFIG };
		const body = (await res.json()) as Partial<{
			api_base: string;
			token: string;
			poll_interval_ms: number;
		}>;
		return {
			apiBase: body.api_base ?? DEFAULT_CONFIG.apiBase,
			token: body.token ?? DEFAULT_CONFIG.token,
			pollIntervalMs: body.poll_interval_ms ?? DEFAULT_CONFIG.pollIntervalMs,
		};
	} catch {
		return { ...DEFAULT_CONFIG };
	}
}
