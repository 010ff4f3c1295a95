/** Async line queue over a byte stream: feed() chunks in, next() lines out. */
export class LineQueue {
  private buffer = "";
  private lines: string[] = [];
  private waiters: Array<{ resolve: (line: string) => void; reject: (err: Error) => void }> = [];
  private failure: Error | null = null;
  private ended = false;

  feed(chunk: string): void {
    this.buffer += chunk;
    let idx: number;
    while ((idx = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, idx).replace(/\r$/, "");
      this.buffer = this.buffer.slice(idx + 1);
      const waiter = this.waiters.shift();
      if (waiter) {
        waiter.resolve(line);
      } else {
        this.lines.push(line);
      }
    }
  }

  fail(err: Error): void {
    this.failure = err;
    for (const w of this.waiters.splice(0)) w.reject(err);
  }

  end(): void {
    this.ended = true;
    const err = new Error("stream ended");
    for (const w of this.waiters.splice(0)) w.reject(this.failure ?? err);
  }

  next(): Promise<string> {
    const line = this.lines.shift();
    if (line !== undefined) return Promise.resolve(line);
    if (this.failure) return Promise.reject(this.failure);
    if (this.ended) return Promise.reject(new Error("stream ended"));
    return new Promise((resolve, reject) => this.waiters.push({ resolve, reject }));
  }
}
