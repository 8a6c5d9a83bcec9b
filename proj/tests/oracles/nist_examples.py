"""Independent oracle for the SP800-22 worked examples (scipy special functions, direct formulas)."""
import math
from scipy.special import gammaincc, erfc
import numpy as np

def bits(s): return [int(c) for c in s]

def monobit(e):
    n=len(e); s=abs(sum(2*b-1 for b in e))/math.sqrt(n); return erfc(s/math.sqrt(2))
def blockfreq(e,M):
    N=len(e)//M; chi=4*M*sum((sum(e[i*M:(i+1)*M])/M-0.5)**2 for i in range(N)); return gammaincc(N/2,chi/2)
def runs(e):
    n=len(e); pi=sum(e)/n
    if abs(pi-0.5)>=2/math.sqrt(n): return 0.0
    V=1+sum(e[k]!=e[k+1] for k in range(n-1))
    return erfc(abs(V-2*n*pi*(1-pi))/(2*math.sqrt(2*n)*pi*(1-pi)))
def cusum(e,rev=False):
    n=len(e); x=[2*b-1 for b in e]
    if rev: x=x[::-1]
    s=0;z=0
    for v in x: s+=v; z=max(z,abs(s))
    Phi=lambda t: 0.5*erfc(-t/math.sqrt(2))
    a=sum(Phi((4*k+1)*z/math.sqrt(n))-Phi((4*k-1)*z/math.sqrt(n)) for k in range(int((-n/z+1)//4),int((n/z-1)//4)+1))
    b=sum(Phi((4*k+3)*z/math.sqrt(n))-Phi((4*k+1)*z/math.sqrt(n)) for k in range(int((-n/z-3)//4),int((n/z-1)//4)+1))
    return 1-a+b
def psi2(e,m):
    n=len(e)
    if m<=0: return 0.0
    ee=e+e[:m-1]; c={}
    for i in range(n):
        k=tuple(ee[i:i+m]); c[k]=c.get(k,0)+1
    return (2**m)/n*sum(v*v for v in c.values())-n
def serial(e,m):
    p0,p1,p2=psi2(e,m),psi2(e,m-1),psi2(e,m-2)
    d1=p0-p1; d2=p0-2*p1+p2
    return gammaincc(2**(m-2),d1/2), gammaincc(2**(m-3),d2/2)
def apen(e,m):
    n=len(e)
    def phi(m):
        ee=e+e[:m-1]; c={}
        for i in range(n):
            k=tuple(ee[i:i+m]); c[k]=c.get(k,0)+1
        return sum(v/n*math.log(v/n) for v in c.values())
    ap=phi(m)-phi(m+1); chi=2*n*(math.log(2)-ap)
    return gammaincc(2**(m-1),chi/2)
def dft(e):
    n=len(e); x=np.array([2*b-1 for b in e],float); S=np.fft.fft(x)[:n//2]; M=np.abs(S)
    T=math.sqrt(math.log(1/0.05)*n); N0=0.95*n/2; N1=(M<T).sum(); d=(N1-N0)/math.sqrt(n*0.95*0.05/4)
    return erfc(abs(d)/math.sqrt(2))
def nonoverlap(e,B,M_blocks):
    m=len(B); n=len(e); N=M_blocks; M=n//N
    mu=(M-m+1)/2**m; var=M*(1/2**m-(2*m-1)/2**(2*m))
    chi=0
    for j in range(N):
        blk=e[j*M:(j+1)*M]; i=0;W=0
        while i<=M-m:
            if blk[i:i+m]==B: W+=1;i+=m
            else: i+=1
        chi+=(W-mu)**2/var
    return gammaincc(N/2,chi/2)
def longest(e,M,K,vs,pis):
    N=len(e)//M; nu=[0]*(K+1)
    for j in range(N):
        blk=e[j*M:(j+1)*M]; best=cur=0
        for b in blk:
            cur=cur+1 if b else 0; best=max(best,cur)
        idx=min(max(best,vs[0]),vs[-1])-vs[0]; nu[idx]+=1
    chi=sum((nu[i]-N*pis[i])**2/(N*pis[i]) for i in range(K+1))
    return gammaincc(K/2,chi/2), chi
def berlekamp(s):
    n=len(s); b=[0]*n; c=[0]*n; b[0]=c[0]=1; L=0; m=-1
    for N in range(n):
        d=s[N]
        for i in range(1,L+1): d^=c[i]&s[N-i]
        if d:
            t=c[:]
            for j in range(n-N+m): c[N-m+j]^=b[j]
            if L<=N/2: L=N+1-L; m=N; b=t
    return L

if __name__=="__main__":
    import mpmath
    mpmath.mp.prec=140
    pi_bits=bin(int(mpmath.pi*2**98))[2:]
    print("pi100", pi_bits)
    e100=bits("1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000")
    print("pi matches", pi_bits==''.join(map(str,e100)))
    print("monobit10", monobit(bits("1011010101")), "monobit100", monobit(e100))
    print("blockfreq10", blockfreq(bits("0110011010"),3), "blockfreq100", blockfreq(e100,10))
    print("runs10", runs(bits("1001101011")), "runs100", runs(e100))
    print("cusum10", cusum(bits("1011010111")), "cusum100", cusum(e100), cusum(e100,True))
    print("dft10", dft(bits("1001010011")), "dft100", dft(e100))
    print("nonover", nonoverlap(bits("10100100101110010110"),[0,0,1],2))
    print("serial", serial(bits("0011011101"),3), "serial100", serial(e100,2))
    print("apen10", apen(bits("0100110101"),3), "apen100", apen(e100,2))
    lr=bits("11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001101101100010110010")
    print("longest128", longest(lr,8,3,[1,2,3,4],[0.2148,0.3672,0.2305,0.1875]))
    print("BM", berlekamp(bits("1101011110001")))
