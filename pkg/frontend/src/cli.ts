import { spawn } from "child_process";
import { mkdtemp, rm, writeFile } from "fs/promises";
import { tmpdir } from "os";
import { join } from "path";

/**
 * Raised when the genforge CLI exits non-zero. The message is the CLI's own
 * diagnostic with the "genforge <command>: " prefix stripped, so callers see
 * the same text a shell user would.
 */
export class GenforgeCliError extends Error {
  constructor(message: string, readonly exitCode: number, readonly stderr: string) {
    super(message);
    this.name = "GenforgeCliError";
  }
}

// Install the Python package first (`pip install -e .` in the repo root) so
// the `genforge` entry point is on PATH. Set GENFORGE_CLI to call it some
// other way, e.g. GENFORGE_CLI="python3 -m genforge.cli".
const CLI = (process.env.GENFORGE_CLI ?? "genforge").split(" ");

export function runGenforge(args: string[]): Promise<string> {
  return new Promise((resolve, reject) => {
    const child = spawn(CLI[0], [...CLI.slice(1), ...args]);
    let out = "";
    let err = "";
    child.stdout.on("data", (chunk) => { out += chunk; });
    child.stderr.on("data", (chunk) => { err += chunk; });
    child.on("error", reject);
    child.on("close", (code) => {
      if (code === 0) {
        resolve(out);
        return;
      }
      const last = err.trim().split("\n").pop() ?? "";
      const message = last.replace(/^genforge \S+: /, "") || `exit code ${code}`;
      reject(new GenforgeCliError(message, code ?? -1, err));
    });
  });
}

/** Run `fn` with a scratch directory that is removed afterwards. */
export async function withScratchDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "genforge-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

/** Write one JSON object per line; the CLI's dataset/hypothesis format. */
export async function writeJsonl(path: string, rows: object[]): Promise<void> {
  await writeFile(path, rows.map((row) => JSON.stringify(row) + "\n").join(""), "utf-8");
}
