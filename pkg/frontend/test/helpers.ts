import { readFileSync } from 'node:fs';

import { Scheduler } from '../src/state.js';

export function fixture<T>(name: string): T {
  const url = new URL(`../../test/fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, 'utf-8')) as T;
}

export class FakeScheduler implements Scheduler {
  private tasks = new Map<number, () => void>();
  private nextId = 1;

  set(fn: () => void, _ms: number): number {
    const id = this.nextId++;
    this.tasks.set(id, fn);
    return id;
  }

  clear(id: number): void {
    this.tasks.delete(id);
  }

  get pending(): number {
    return this.tasks.size;
  }

  flush(): void {
    const fns = [...this.tasks.values()];
    this.tasks.clear();
    for (const fn of fns) fn();
  }
}

export function drain(): Promise<void> {
  return new Promise(resolve => setTimeout(resolve, 0));
}
