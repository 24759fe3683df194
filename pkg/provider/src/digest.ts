import { createHash } from "crypto";
import { readFileSync } from "fs";

/** Digest of raw bytes in the "sha256:<hex>" form the artifact manifests carry. */
export function sha256Bytes(data: Buffer | string): string {
  const hash = createHash("sha256");
  hash.update(data);
  return "sha256:" + hash.digest("hex");
}

export function sha256File(path: string): string {
  return sha256Bytes(readFileSync(path));
}
