/**
 * API base URL. The build stamps dist/env.js from the FLEXQ_API_BASE
 * environment variable (see scripts/stamp-env.mjs); unset means
 * same-origin, for serving the console behind the API host.
 */
export function apiBase(): string {
  const stamped = (globalThis as { FLEXQ_API_BASE?: string }).FLEXQ_API_BASE;
  return stamped ?? "";
}
